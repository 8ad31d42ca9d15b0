"""Command line driver: ``annc check | verify | gen``.

Exit codes: 0 clean (warnings allowed unless ``--deny-warnings``), 1 when an
error diagnostic was reported, 2 on usage or I/O failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .checker import check_program
from .codegen import DEFAULT_SOURCE_VERSION, render_services, render_unit, write_files
from .core import AnnError, AnnotationUnit, Diagnostic, Severity, sort_diagnostics
from .java import CompilationUnit, parse_java_source
from .parser import parse_with_diagnostics
from .validator import validate_unit

EXIT_OK, EXIT_ERRORS, EXIT_FAILURE = 0, 1, 2


@dataclass
class CliConfig:
    command: str
    ann_paths: List[str]
    java_paths: List[str] = field(default_factory=list)
    out_dir: Optional[str] = None
    force: bool = False
    json: bool = False
    allowlist: List[str] = field(default_factory=list)
    source_version: str = DEFAULT_SOURCE_VERSION
    services: bool = False
    deny_warnings: bool = False


class _Run:
    """Collects diagnostics and I/O failures for one invocation."""

    def __init__(self, config: CliConfig, stdout, stderr):
        self.config = config
        self.stdout = stdout
        self.stderr = stderr
        self.diagnostics: List[Diagnostic] = []
        self.io_failed = False

    def fail_io(self, message: str):
        print(f"annc: {message}", file=self.stderr)
        self.io_failed = True

    def read(self, path: str) -> Optional[str]:
        try:
            with open(path, encoding="utf-8") as f:
                return f.read()
        except (OSError, UnicodeDecodeError) as exc:
            reason = exc.strerror if isinstance(exc, OSError) and exc.strerror else str(exc)
            self.fail_io(f"cannot read {path}: {reason}")
            return None

    def failing(self, diagnostics: Sequence[Diagnostic]) -> bool:
        return any(d.is_error or (self.config.deny_warnings and d.severity is Severity.WARNING)
                   for d in diagnostics)

    @property
    def exit_code(self) -> int:
        if self.io_failed:
            return EXIT_FAILURE
        return EXIT_ERRORS if self.failing(self.diagnostics) else EXIT_OK

    def emit(self):
        if self.config.json:
            json.dump([d.to_json() for d in self.diagnostics], self.stdout, indent=2)
            self.stdout.write("\n")
        else:
            for d in self.diagnostics:
                print(d.format(), file=self.stdout)

    def load_units(self) -> List[AnnotationUnit]:
        """Parse and validate every .ann path; returns the units that parsed."""
        units = []
        for path in self.config.ann_paths:
            text = self.read(path)
            if text is None:
                continue
            unit, found = parse_with_diagnostics(text, path)
            if found:
                self.diagnostics.extend(sort_diagnostics(found))
                continue
            self.diagnostics.extend(validate_unit(unit, self.config.allowlist))
            units.append(unit)
        return units


def _java_files(run: _Run, paths: Sequence[str]) -> List[str]:
    files = []
    for p in paths:
        if os.path.isdir(p):
            found = []
            for root, dirs, names in os.walk(p):
                dirs.sort()
                found.extend(os.path.join(root, n) for n in sorted(names) if n.endswith(".java"))
            files.extend(found)
        elif os.path.exists(p):
            files.append(p)
        else:
            run.fail_io(f"cannot read {p}: No such file or directory")
    return files


def cmd_check(config: CliConfig, stdout=None, stderr=None) -> int:
    run = _Run(config, stdout or sys.stdout, stderr or sys.stderr)
    run.load_units()
    run.emit()
    return run.exit_code


def cmd_verify(config: CliConfig, stdout=None, stderr=None) -> int:
    run = _Run(config, stdout or sys.stdout, stderr or sys.stderr)
    units = run.load_units()
    if not run.io_failed and not run.failing(run.diagnostics):
        program: List[CompilationUnit] = []
        for path in _java_files(run, config.java_paths):
            text = run.read(path)
            if text is None:
                continue
            try:
                program.append(parse_java_source(text, path))
            except AnnError as exc:
                run.diagnostics.extend(exc.diagnostics)
        found = []
        for unit in units:
            found.extend(check_program(unit, program))
        run.diagnostics.extend(sort_diagnostics(found))
    run.emit()
    return run.exit_code


def cmd_gen(config: CliConfig, stdout=None, stderr=None) -> int:
    run = _Run(config, stdout or sys.stdout, stderr or sys.stderr)
    units = run.load_units()
    written: List[str] = []
    if not run.io_failed and not run.failing(run.diagnostics):
        files = []
        for unit in units:
            files.extend(render_unit(unit, config.source_version))
        if config.services:
            extra = render_services(units)
            if extra is not None:
                files.append(extra)
        try:
            written = write_files(files, config.out_dir, config.force)
        except AnnError as exc:
            run.diagnostics.extend(exc.diagnostics)
            if any(d.code == "ANN0402" for d in exc.diagnostics):
                run.io_failed = True
    run.emit()
    # keep stdout a single JSON document in --json mode
    manifest_stream = run.stderr if config.json else run.stdout
    for path in written:
        print(path, file=manifest_stream)
    return run.exit_code


COMMANDS = {"check": cmd_check, "verify": cmd_verify, "gen": cmd_gen}


def build_arg_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print diagnostics as a JSON array")
    common.add_argument("--allow", action="append", default=[], metavar="NAME",
                        help="treat @NAME as a known external annotation (repeatable)")
    common.add_argument("--deny-warnings", action="store_true", help="exit 1 on warnings too")

    parser = argparse.ArgumentParser(prog="annc", description="Compiler for the Ann annotation language.")
    parser.add_argument("--version", action="version", version=f"annc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="parse and validate .ann files")
    check.add_argument("files", nargs="+")

    verify = sub.add_parser("verify", parents=[common], help="check Java sources against .ann constraints")
    verify.add_argument("files", nargs="+")
    verify.add_argument("--java", nargs="+", required=True, metavar="PATH",
                        help=".java files or directories searched recursively")

    gen = sub.add_parser("gen", parents=[common], help="generate annotation declarations and processors")
    gen.add_argument("files", nargs="+")
    gen.add_argument("-o", "--out", required=True, metavar="DIR")
    gen.add_argument("--force", action="store_true", help="overwrite existing files")
    gen.add_argument("--services", action="store_true",
                     help="also write META-INF/services/javax.annotation.processing.Processor")
    gen.add_argument("--source-version", default=DEFAULT_SOURCE_VERSION, metavar="V",
                     help=f"SourceVersion constant for generated processors (default {DEFAULT_SOURCE_VERSION})")
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> CliConfig:
    args = build_arg_parser().parse_args(argv)
    return CliConfig(
        command=args.command,
        ann_paths=list(args.files),
        java_paths=list(getattr(args, "java", None) or []),
        out_dir=getattr(args, "out", None),
        force=getattr(args, "force", False),
        json=args.json,
        allowlist=list(args.allow),
        source_version=getattr(args, "source_version", DEFAULT_SOURCE_VERSION),
        services=getattr(args, "services", False),
        deny_warnings=args.deny_warnings,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_FAILURE
    return COMMANDS[config.command](config)


if __name__ == "__main__":
    sys.exit(main())
