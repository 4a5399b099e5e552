"""
The worked corpus: named .picl sources shipped with the workbench.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from calculi.syntax import Calculus
from parsing.parser import SourceFile, parse_source

logger = logging.getLogger('Workbench.Syntax')

SOURCES = Path(__file__).resolve().parent / 'sources'

LEADER_ELECTION = 'lepi'
STAR = 'pspi'
PATTERN_M = 'pm'
TRANSLATION = 'translation'


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    calculus: Calculus
    source: str
    description: str = ''

    def load(self) -> SourceFile:
        return parse_source(self.source, self.calculus)

    @property
    def free_context(self) -> str:
        """The ``#free`` lines of the source, one per line."""
        return '\n'.join(
            line.strip() for line in self.source.splitlines() if line.strip().startswith('#free')
        )


def _description(text: str) -> str:
    lines = [line.strip()[2:].strip() for line in text.splitlines() if line.strip().startswith('//')]
    return ' '.join(lines)


def _calculus(text: str) -> Calculus:
    for line in text.splitlines():
        if line.strip().startswith('#calculus'):
            return Calculus(line.strip()[len('#calculus'):].strip())
    return Calculus.MIX


def worked_entries() -> List[CorpusEntry]:
    """Every shipped source, sorted by name."""
    entries = []
    for path in sorted(SOURCES.glob('*.picl')):
        text = path.read_text()
        entries.append(CorpusEntry(path.stem, _calculus(text), text, _description(text)))
    return entries


def worked_entry(name: str) -> Optional[CorpusEntry]:
    for entry in worked_entries():
        if entry.name == name:
            return entry
    return None


def load_worked(name: str) -> SourceFile:
    """
    Parse a shipped source by name.

    Raises:
        KeyError: when no source has that name
    """
    entry = worked_entry(name)
    if entry is None:
        raise KeyError(f"no corpus source named '{name}'")
    logger.debug(f"Loading corpus source {name}")
    return entry.load()
