"""annc: parser, validator, checker and Java generator for the Ann annotation language."""
from .core import (
    AnnError,
    AnnotationDecl,
    AnnotationUnit,
    AttributeDecl,
    Constraint,
    Diagnostic,
    Statement,
    TargetKind,
    Modifier,
    derive_target_kinds,
    java_element_types,
)
from .parser import parse_unit, parse_file
from .printer import print_unit

__version__ = "0.1.0"
