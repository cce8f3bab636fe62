from .parser import ParseError, parse_context, parse_term, parse_type
from .printer import print_context, print_term, print_type

__all__ = ["ParseError", "parse_context", "parse_term", "parse_type",
           "print_context", "print_term", "print_type"]
