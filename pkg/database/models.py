"""
Database models for the workbench.

Three tables: the term corpus, persisted analysis runs and typed
key/value configuration.
"""
import json

from sqlalchemy import (
    Boolean, CheckConstraint, Column, DateTime, Index, Integer, String, Text
)
from sqlalchemy.sql import func

from .connection import Base

CALCULI = ('pi', 'cmv+', 'cmv')
VERDICTS = ('ok', 'pass', 'fail', 'unknown-bounded', 'unsupported', 'error')


class CorpusTerm(Base):
    """
    A named source term, as shipped in corpus/sources or generated.

    ``source`` is the complete .picl text, free-name declarations included.
    """
    __tablename__ = "corpus_terms"

    id = Column(Integer, primary_key=True, index=True)
    name = Column(String(100), nullable=False, unique=True, index=True)
    calculus = Column(String(10), nullable=False)
    source = Column(Text, nullable=False)
    free_context = Column(Text, nullable=True)
    well_typed = Column(Boolean, nullable=True)  # None for π terms
    description = Column(Text, nullable=True)

    created_at = Column(DateTime(timezone=True), server_default=func.now(), nullable=False)
    updated_at = Column(DateTime(timezone=True), server_default=func.now(), onupdate=func.now(), nullable=False)

    __table_args__ = (
        CheckConstraint(f"calculus IN {CALCULI}", name='check_calculus_valid'),
    )

    def __repr__(self):
        return f"<CorpusTerm(name='{self.name}', calculus='{self.calculus}', well_typed={self.well_typed})>"


class AnalysisRun(Base):
    """
    One recorded command invocation and its deterministic JSON report.
    """
    __tablename__ = "analysis_runs"

    id = Column(Integer, primary_key=True, index=True)
    command = Column(String(50), nullable=False)
    subject = Column(Text, nullable=False)  # corpus name or the source text
    seed = Column(Integer, nullable=True)
    verdict = Column(String(20), nullable=False)
    report = Column(Text, nullable=False)

    created_at = Column(DateTime(timezone=True), server_default=func.now(), nullable=False)

    __table_args__ = (
        CheckConstraint(f"verdict IN {VERDICTS}", name='check_verdict_valid'),
        Index('idx_run_command_verdict', 'command', 'verdict'),
    )

    def get_report(self) -> dict:
        return json.loads(self.report)

    def __repr__(self):
        return f"<AnalysisRun(id={self.id}, command='{self.command}', verdict='{self.verdict}')>"


class Config(Base):
    """
    Stores workbench configuration as key-value pairs.

    Examples: max_depth, max_states, seed, star_max_nodes.
    """
    __tablename__ = "config"

    id = Column(Integer, primary_key=True, index=True)
    key = Column(String(100), nullable=False, unique=True, index=True)
    value = Column(Text, nullable=False)
    description = Column(Text, nullable=True)
    value_type = Column(String(20), nullable=False, default='string')  # 'string', 'int', 'float', 'bool', 'json'

    created_at = Column(DateTime(timezone=True), server_default=func.now(), nullable=False)
    updated_at = Column(DateTime(timezone=True), server_default=func.now(), onupdate=func.now(), nullable=False)

    # Constraints
    __table_args__ = (
        CheckConstraint("value_type IN ('string', 'int', 'float', 'bool', 'json')", name='check_value_type_valid'),
    )

    def get_typed_value(self):
        """
        Convert the stored string value to the appropriate Python type.
        """
        if self.value_type == 'int':
            return int(self.value)
        elif self.value_type == 'float':
            return float(self.value)
        elif self.value_type == 'bool':
            return self.value.lower() in ('true', '1', 'yes')
        elif self.value_type == 'json':
            return json.loads(self.value)
        else:
            return self.value

    def __repr__(self):
        return f"<Config(key='{self.key}', value='{self.value}', type='{self.value_type}')>"
