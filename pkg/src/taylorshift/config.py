"""Experiment configuration files.

Sections::

    [geometry]   preset = disk-default   (or inline keys as in presets.ini)
    [targets]    p = 1                   coefficients of z, z^2, ...
                 R1 = 1                  b_1, b_2, ... of each principal part
                 R2 = 0, 1
    [sequences]  lambda1 = power 1       power e | polynomial c d |
                 lambda2 = power 2       exponential c a | explicit v1 v2 ...
    [run]        epsilon = 1e-2
                 n_max = 40
                 precision = 256
    [output]     csv = decay.csv
                 svg = decay.svg         optional

Complex values use ``re+imi`` literals, read exactly.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from fractions import Fraction

from .approximant import IndexSequence, TargetSpec
from .errors import ConfigError, TaylorShiftError
from .geometry import Geometry, geometry_from_section, preset
from .laurent import DEFAULT_PRECISION, LaurentPoly, parse_complex


@dataclass(frozen=True)
class ExperimentConfig:
    geometry: Geometry
    targets: TargetSpec
    sequences: tuple
    epsilon: Fraction
    n_max: int
    precision: int
    csv_path: str | None
    svg_path: str | None


def _coefficients(text: str, key: str) -> list:
    try:
        return [parse_complex(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None


def parse_sequence(text: str) -> IndexSequence:
    """``power 2``, ``polynomial 1/2 3``, ``exponential 1 3/2`` or ``explicit 1 4 9``."""
    parts = text.replace(",", " ").split()
    if not parts:
        raise ConfigError("empty sequence specification")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "power" and len(args) == 1:
            return IndexSequence.power(int(args[0]))
        if kind == "polynomial" and len(args) == 2:
            return IndexSequence.polynomial(Fraction(args[0]), Fraction(args[1]))
        if kind == "exponential" and len(args) == 2:
            return IndexSequence.exponential(Fraction(args[0]), Fraction(args[1]))
        if kind == "explicit" and args:
            return IndexSequence.explicit([int(a) for a in args])
    except (ValueError, TaylorShiftError) as exc:
        raise ConfigError(f"bad sequence {text!r}: {exc}") from None
    raise ConfigError(f"bad sequence {text!r}")


def _numbered(section, prefix: str) -> list:
    keys = sorted((k for k in section if k.startswith(prefix) and k[len(prefix):].isdigit()), key=lambda k: int(k[len(prefix):]))
    if [int(k[len(prefix):]) for k in keys] != list(range(1, len(keys) + 1)):
        raise ConfigError(f"{prefix}1, {prefix}2, ... must be numbered consecutively")
    return [section[k] for k in keys]


def load_config(path, samples: int | None = None, precision: int | None = None) -> ExperimentConfig:
    """Parse and validate a config file; raises :class:`ConfigError` on any problem."""
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return config_from_parser(parser, samples=samples, precision=precision)


def config_from_parser(parser, samples: int | None = None, precision: int | None = None) -> ExperimentConfig:
    for name in ("geometry", "targets", "sequences", "run"):
        if name not in parser:
            raise ConfigError(f"missing [{name}] section")
    geo = dict(parser["geometry"])
    try:
        if "preset" in geo:
            geometry = preset(geo["preset"], samples=samples or (int(geo["samples"]) if "samples" in geo else None))
        else:
            if samples is not None:
                geo["samples"] = str(samples)
            geometry = geometry_from_section(geo, "inline")
    except (TaylorShiftError, ValueError, TypeError) as exc:
        raise ConfigError(f"[geometry]: {exc}") from None

    tsec = parser["targets"]
    p = LaurentPoly({m: c for m, c in enumerate(_coefficients(tsec.get("p", ""), "p"), 1)})
    parts = [
        LaurentPoly({-k: c for k, c in enumerate(_coefficients(text, f"R{i}"), 1)})
        for i, text in enumerate(_numbered(tsec, "r"), 1)
    ]
    seqs = tuple(parse_sequence(t) for t in _numbered(parser["sequences"], "lambda"))
    if len(seqs) < 2:
        raise ConfigError("at least two sequences are required")
    if len(parts) != len(seqs):
        raise ConfigError(f"{len(seqs)} sequences but {len(parts)} principal parts")
    try:
        targets = TargetSpec(p, parts)
    except TaylorShiftError as exc:
        raise ConfigError(f"[targets]: {exc}") from None

    run = parser["run"]
    try:
        epsilon = Fraction(run.get("epsilon", ""))
        n_max = int(run.get("n_max", "40"))
        bits = int(precision or run.get("precision", str(DEFAULT_PRECISION)))
    except ValueError as exc:
        raise ConfigError(f"[run]: {exc}") from None
    if epsilon <= 0:
        raise ConfigError("epsilon must be positive")
    if n_max < 1:
        raise ConfigError("n_max must be at least 1")
    if bits < 64:
        raise ConfigError("precision must be at least 64 bits")
    out = parser["output"] if "output" in parser else {}
    return ExperimentConfig(geometry, targets, seqs, epsilon, n_max, bits, out.get("csv"), out.get("svg"))
