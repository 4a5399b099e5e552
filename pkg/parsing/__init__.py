from .parser import SourceFile, parse, parse_source, parse_type
from .printer import print_branch, print_expr, print_term, print_type

__all__ = [
    'SourceFile',
    'parse',
    'parse_source',
    'parse_type',
    'print_branch',
    'print_expr',
    'print_term',
    'print_type'
]
