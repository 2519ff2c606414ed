"""Command-line entry point: ``smallball <command> ...``.

Every run produces a :class:`RunReport` that serialises canonically, so the
same configuration and seed always give byte-identical output.  Exit codes:
0 when nothing failed, 1 when a check failed, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import jsonschema

from . import __version__
from .canon import digest, dumps, to_plain
from .errors import FormatError, RejectedInputError, SearchBudgetError, SmallBallError, UsageError
from .groups import (
    RationalSpace,
    RationalVector,
    Universe,
    carrier_from_json,
    finite_elements,
    make_cyclic,
    make_dihedral,
    make_symmetric,
    normal_subgroups,
)
from .mis import DEFAULT_BUDGET
from .reports import FAIL, INCONCLUSIVE, PASS, REJECTED, STATUSES, VerificationReport
from .sets import GroupSet, set_from_json

COMMANDS = ("packing", "lemma", "verify", "tightness", "table", "moments", "lln")
CONFIG_ENV = "SMALLBALL_CONFIG"
SCHEMA_VERSION = 1

_ARG_TYPES = {
    "carrier": "string", "f": "string", "k": "string", "mode": "string", "lemma": "string", "sweep": "string",
    "theorem": "string", "dist": "array", "hist": "string", "iid": "boolean",
    "construction": "string", "n_min": "integer", "n_max": "integer", "step": "integer",
    "grid": "array", "table": "string", "pitch": "string", "check": "string", "norms": "string",
    "phi": "string", "sampler": "string", "samples": "integer", "m": "integer", "n": "integer",
    "dist2": "string", "tuples": "string", "tuple_k": "integer", "schedule": "array",
    "a": "string", "b": "string", "p": "string", "q": "string", "s": "string",
    "delta": "string", "r": "string", "eps": "string",
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": list(COMMANDS)},
        "seed": {"type": "integer"},
        "format": {"enum": ["json", "csv"]},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "budget": {"type": "integer", "minimum": 1},
        "out": {"type": "string"},
        "strict": {"type": "boolean"},
        "args": {
            "type": "object",
            "properties": {
                name: ({"type": kind} if kind != "string" else {"type": ["string", "number"]})
                for name, kind in _ARG_TYPES.items()
            },
            "additionalProperties": False,
        },
    },
    "required": ["schema_version"],
    "additionalProperties": False,
}


@dataclass
class RunConfig:
    command: str
    args: dict = field(default_factory=dict)
    seed: int | None = None
    format: str = "json"
    tolerance: float | None = None
    budget: int = DEFAULT_BUDGET
    out: str | None = None
    strict: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"/command: unknown command {self.command!r}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError("/tolerance: tolerances must be positive")
        if self.format not in ("json", "csv"):
            raise UsageError(f"/format: unknown format {self.format!r}")

    def digest(self):
        body = asdict(self)
        body.pop("out")
        return digest(body)


@dataclass
class RunReport:
    version: str
    config_digest: str
    items: list
    summary: dict

    @classmethod
    def assemble(cls, config, items):
        plain = [to_plain(item) for item in items]
        summary = {s: 0 for s in STATUSES}
        for item in plain:
            summary[item.get("status", PASS)] += 1
        return cls(__version__, config.digest(), plain, summary)

    def to_json(self):
        return {
            "kind": "run",
            "version": self.version,
            "config_digest": self.config_digest,
            "items": self.items,
            "summary": self.summary,
        }

    def exit_code(self, strict=False):
        if self.summary[FAIL]:
            return 1
        if strict and self.summary[INCONCLUSIVE]:
            return 1
        return 0


def emit(report, fmt="json"):
    """Serialise a report: canonical JSON, or CSV for tightness sweeps only."""
    if fmt == "json":
        return (dumps(report.to_json()) + "\n").encode()
    if fmt == "csv":
        if any(item.get("kind") != "sweep" for item in report.items):
            raise FormatError("CSV output is only available for tightness sweeps")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "ratio_num", "ratio_den", "constant", "gap"])
        for item in report.items:
            ratio = Fraction(item["ratio"])
            writer.writerow([item["n"], ratio.numerator, ratio.denominator, item["constant"], item["gap"]])
        return buf.getvalue().encode()
    raise FormatError(f"unknown format {fmt!r}")


def parse(data):
    """Inverse of :func:`emit` for JSON output."""
    obj = json.loads(data.decode() if isinstance(data, bytes) else data)
    if obj.get("kind") != "run":
        raise FormatError("not a run report")
    return RunReport(obj["version"], obj["config_digest"], obj["items"], obj["summary"])


def _read_json(path, what):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {what} file {path!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file {path!r} is not valid JSON: {exc}") from exc


def load_config(path):
    """Read and validate a config file; errors name the offending field."""
    obj = _read_json(path, "config")
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        raise UsageError(f"config {path}: {pointer}: {err.message}")
    return obj


def _q(value, name):
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--{name.replace('_', '-')}: {value!r} is not a rational number") from exc


def _need(args, name):
    value = args.get(name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for this command")
    return value


def _build(path, what, build):
    """Parse a JSON input file with ``build``; malformed content is a usage error."""
    obj = _read_json(path, what)
    try:
        return build(obj)
    except SmallBallError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{what} file {path!r} is malformed: {exc}") from exc


def _load_dist(path):
    from .prob import FiniteDist

    return _build(path, "distribution", FiniteDist.from_json)


def _load_set(path, carrier):
    return _build(path, "set", lambda obj: set_from_json(obj, carrier))


def _load_hist(path):
    from .prob import HistogramDensity

    def build(h):
        return HistogramDensity(h["origin"], h["width"], [Fraction(str(m)) for m in h["masses"]])

    return _build(path, "histogram", build)


def _carrier(args):
    path = args.get("carrier")
    if path is None:
        return None
    return _build(path, "carrier", carrier_from_json)


def _rejected(theorem, exc):
    return VerificationReport(theorem, None, None, None, REJECTED, notes=(str(exc),))


def _budget_report(theorem, exc):
    return VerificationReport(
        theorem, exc.lower, exc.upper, None, INCONCLUSIVE,
        notes=(f"search budget exhausted after {exc.nodes} nodes",),
        witness={"lower": exc.lower, "upper": exc.upper},
    )


@dataclass(frozen=True)
class PackingResult:
    value: object
    witness: object
    nodes: int
    lower: int
    upper: int
    caveat: str = ""
    status: str = PASS

    def to_json(self):
        out = {
            "kind": "packing",
            "value": to_plain(self.value),
            "witness": to_plain(self.witness),
            "nodes": self.nodes,
            "lower": self.lower,
            "upper": self.upper,
            "status": self.status,
        }
        if self.caveat:
            out["caveat"] = self.caveat
        return out


def _cmd_packing(cfg):
    from .groups import Lattice
    from .packing import WINDOW_CAVEAT, entropy_number, entropy_number_linear, packing_search

    args = cfg.args
    f = _load_set(_need(args, "f"), _carrier(args))
    k = _load_set(_need(args, "k"), f.carrier)
    if args.get("a") is not None or args.get("b") is not None:
        a, b = _q(args.get("a", 1), "a"), _q(args.get("b", 1), "b")
        try:
            value = entropy_number_linear(a, b, f, k, budget=cfg.budget)
        except RejectedInputError as exc:
            return [_rejected("packing-linear", exc)]
        return [PackingResult(value, None, 0, 0, 0)]
    if args.get("mode") == "bounds":
        lo, hi = entropy_number(f, k, mode="bounds", budget=cfg.budget)
        return [PackingResult(None, None, 0, lo, hi)]
    try:
        result, witness = packing_search(f, k, cfg.budget)
    except SearchBudgetError as exc:
        return [_budget_report("packing", exc)]
    caveat = WINDOW_CAVEAT if isinstance(f.carrier, Lattice) else ""
    return [PackingResult(result.size, witness, result.nodes, result.lower, result.upper, caveat)]


def _all_nonempty_subsets(carrier):
    elems = finite_elements(carrier)
    return [GroupSet(carrier, c) for r in range(1, len(elems) + 1) for c in itertools.combinations(elems, r)]


def _grid_pairs(carrier, count, seed, fixed=()):
    from .multisets import sample_admissible_pairs

    pairs = list(fixed)
    seen = {(f.members, k.members) for f, k in pairs}
    for f, k in sample_admissible_pairs(carrier, count + len(pairs), seed):
        if len(pairs) >= count:
            break
        if (f.members, k.members) not in seen:
            seen.add((f.members, k.members))
            pairs.append((f, k))
    return pairs


def _preset(name, seed):
    """Named sweep presets: a carrier, maximum multiset size and (F, K) pairs."""
    if name == "exhaustive-z7-m5":
        g = make_cyclic(7)
        return {"carrier": g, "m_max": 5, "pairs": _grid_pairs(g, 200, seed)}
    if name in ("exhaustive-d3-m4", "exhaustive-s3-m4"):
        g = make_dihedral(3) if name == "exhaustive-d3-m4" else make_symmetric(3)
        ks = [GroupSet(g, h) for h in normal_subgroups(g)]
        return {"carrier": g, "m_max": 4, "pairs": [(f, k) for k in ks for f in _all_nonempty_subsets(g)]}
    if name == "exhaustive-q9-m4":
        line = RationalSpace(1, Universe(-4, 4, 1))
        grid = line.grid()
        example = (GroupSet(line, grid), GroupSet(line, [-1, 0, 1]))
        return {"carrier": line, "m_max": 4, "pairs": _grid_pairs(line, 200, seed, [example]), "a": 1, "b": 2}
    if name == "random-r2-m8":
        return {"carrier": RationalSpace(2), "m_max": 8, "random": 100}
    raise UsageError(f"--sweep: unknown preset {name!r}")


def _sweep_input(desc, seed):
    if not desc.endswith(".json"):
        return _preset(desc, seed)
    obj = _read_json(desc, "sweep")
    if "preset" in obj:
        return _preset(obj["preset"], obj.get("seed", seed))
    carrier = carrier_from_json(_need(obj, "carrier"))
    out = {"carrier": carrier, "m_max": int(obj.get("m_max", 3))}
    if "random" in obj:
        out["random"] = int(obj["random"])
        return out
    if "pairs" in obj:
        out["pairs"] = [(set_from_json(p["f"], carrier), set_from_json(p["k"], carrier)) for p in obj["pairs"]]
    else:
        out["pairs"] = _grid_pairs(carrier, int(obj.get("sample", 0)), int(obj.get("seed", seed)))
    for key in ("a", "b", "s"):
        if key in obj:
            out[key] = obj[key]
    return out


def _random_multisets(carrier, count, m_max, seed):
    import random

    from .multisets import Multiset

    rng = random.Random(seed)
    out = []
    for _ in range(count):
        m = rng.randint(1, m_max)
        items = [
            RationalVector([Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for _ in range(carrier.dim)])
            if carrier.dim > 1
            else Fraction(rng.randint(-8, 8), rng.randint(1, 4))
            for _ in range(m)
        ]
        out.append(Multiset(carrier, items))
    return out


def _cmd_lemma(cfg):
    from .multisets import lemma_sweep, verify_turan_bound

    args = cfg.args
    lemma = _need(args, "lemma")
    desc = _sweep_input(_need(args, "sweep"), cfg.seed or 0)
    if lemma == "turan":
        if "random" not in desc:
            raise UsageError("the turan check takes a random sweep, e.g. --sweep random-r2-m8")
        return [verify_turan_bound(t) for t in _random_multisets(desc["carrier"], desc["random"], desc["m_max"], cfg.seed or 0)]
    if lemma not in ("3.1", "3.3", "4.1", "4.diff", "5.1", "katona"):
        raise UsageError(f"unknown lemma {lemma!r}")
    s = _q(args.get("s") or desc.get("s", 2), "s")
    a = _q(args.get("a") or desc.get("a", 1), "a")
    b = _q(args.get("b") or desc.get("b", 1), "b")
    try:
        return lemma_sweep(lemma, desc["carrier"], desc.get("pairs", []), desc["m_max"], s=s, a=a, b=b)
    except RejectedInputError as exc:
        return [_rejected(lemma, exc)]


def _cmd_verify(cfg):
    from .prob import (
        THEOREMS,
        renyi_compare,
        verify_concentration_sums,
        verify_katona,
        verify_linear_combi,
        verify_q_linear,
    )

    args = cfg.args
    theorem = _need(args, "theorem")
    try:
        if theorem == "renyi":
            density = _load_hist(_need(args, "hist"))
            return [renyi_compare(density).report(density)]
        if theorem not in THEOREMS:
            raise UsageError(f"unknown theorem {theorem!r}; expected one of {sorted(THEOREMS) + ['renyi']}")
        dists = [_load_dist(p) for p in _need(args, "dist")]
        x = dists[0]
        if theorem == "3.5":
            return [verify_katona(x)]
        f = _load_set(_need(args, "f"), x.carrier)
        k = _load_set(_need(args, "k"), x.carrier)
        if theorem == "7.1":
            return [verify_concentration_sums(dists, f, k, iid=bool(args.get("iid")))]
        if theorem in ("5.1", "7.1-linear"):
            a, b = _q(_need(args, "a"), "a"), _q(_need(args, "b"), "b")
            fn = verify_linear_combi if theorem == "5.1" else verify_q_linear
            return [fn(x, f, k, a, b)]
        return [THEOREMS[theorem](x, f, k)]
    except RejectedInputError as exc:
        return [_rejected(theorem, exc)]


DEFAULT_GRID = (1, 2, 5, 10, 20, 50, 100, 150, 200, 250, 300)


def _cmd_tightness(cfg):
    from .extremal import sym_kat_points, tightness_sweep

    args = cfg.args
    construction = _need(args, "construction")
    if construction not in ("dll", "ay", "symkat"):
        raise UsageError(f"--construction: unknown construction {construction!r}")
    a, b = _q(args.get("a", 1), "a"), _q(args.get("b", 2), "b")
    params = {}
    for key in ("delta", "r", "eps"):
        if args.get(key) is not None:
            params[key] = _q(args[key], key)
    if args.get("grid"):
        grid = [int(n) for n in args["grid"]]
    else:
        n_max = int(args.get("n_max") or (sym_kat_points(a, b) if construction == "symkat" else 200))
        n_min = int(args.get("n_min") or 1)
        if construction == "symkat":
            n_max = min(n_max, sym_kat_points(a, b))
        if args.get("step"):
            grid = list(range(n_min, n_max + 1, int(args["step"])))
        else:
            grid = sorted({n for n in DEFAULT_GRID if n_min <= n <= n_max} | {n_max} if n_max >= n_min else set())
    try:
        return tightness_sweep(construction, None, grid, a, b, **params)
    except AssertionError as exc:
        return [VerificationReport(f"tightness-{construction}", None, None, None, FAIL, notes=(str(exc),))]


def _cmd_table(cfg):
    from .tables import DEFAULT_PITCH, DEFAULT_TOLERANCE, table_check

    args = cfg.args
    which = _need(args, "table")
    pitch = _q(args["pitch"], "pitch") if args.get("pitch") else DEFAULT_PITCH
    return [table_check(which, pitch=pitch, budget=cfg.budget, tolerance=cfg.tolerance or DEFAULT_TOLERANCE)]


def _parse_json_arg(value, what):
    if value is None:
        return None
    if os.path.isfile(value):
        return _read_json(value, what)
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        return value


def _cmd_moments(cfg):
    from .moments import (
        TOLERANCE,
        LogConcaveSampler,
        NormPair,
        holder_check,
        kh_check,
        posdef_check,
        reverse_holder_constant,
        reverse_holder_mc,
        unimodal_check,
    )

    args = cfg.args
    check = _need(args, "check")
    tol = cfg.tolerance or TOLERANCE
    first, second = (args.get("norms") or "l2,l2").split(",")
    a, b = _q(args.get("a", 1), "a"), _q(args.get("b", 1), "b")
    p, q = float(_q(args.get("p", 1), "p")), float(_q(args.get("q", 1), "q"))
    try:
        if check == "reverse":
            desc = _parse_json_arg(args.get("sampler"), "sampler") or {"family": "gaussian"}
            if isinstance(desc, str):
                desc = {"family": desc}
            dim = int(desc.get("dim", 1))
            pair = NormPair(first, second, dim)
            samples = 100_000 if args.get("samples") is None else int(args["samples"])
            if samples == 0:
                trace = reverse_holder_constant(a, b, p, q, pair)
                return [VerificationReport("reverse-holder-constant", None, None, trace.constant, PASS, witness=trace)]
            seed = cfg.seed if cfg.seed is not None else desc.get("seed")
            if seed is None:
                raise UsageError("--seed is required for Monte Carlo checks")
            sampler = LogConcaveSampler(desc["family"], dim, desc.get("params", {}), int(seed))
            return [reverse_holder_mc(sampler, a, b, p, q, pair, samples, int(seed))]
        x = _load_dist(_need(args, "dist")[0])
        dim = getattr(x.carrier, "dim", 1)
        pair = NormPair(first, second, dim)
        if check == "holder":
            return [holder_check(x, pair, a, b, p, q, tol)]
        if check == "kh":
            return [kh_check(x, pair, p, tol)]
        if check == "unimodal":
            phi = _parse_json_arg(args.get("phi"), "phi") or "gauss"
            return [unimodal_check(x, phi, a, b, tol)]
        if check == "posdef":
            phi = _parse_json_arg(_need(args, "phi"), "phi")
            y = _load_dist(args["dist2"]) if args.get("dist2") else x
            return [posdef_check(x, y, phi, int(args.get("m") or 1), int(args.get("n") or 1), tol)]
    except RejectedInputError as exc:
        return [_rejected(check, exc)]
    raise UsageError(f"unknown moments check {check!r}")


def _decode(e):
    return Fraction(e) if isinstance(e, str) else e


def _cmd_lln(cfg):
    from .multisets import lln_convergence

    args = cfg.args
    if cfg.seed is None:
        raise UsageError("--seed is required for sampled runs")
    x = _load_dist(_need(args, "dist")[0])
    tuples = _parse_json_arg(_need(args, "tuples"), "tuples")
    k = int(args.get("tuple_k") or len(tuples[0]))
    schedule = [int(m) for m in (args.get("schedule") or [10, 100, 1000, 2000])]
    coerce = x.carrier.coerce
    trace = lln_convergence(x, [tuple(coerce(_decode(e)) for e in t) for t in tuples], k, schedule, cfg.seed)
    return [dict(trace.to_json(), status=PASS)]


HANDLERS = {
    "packing": _cmd_packing,
    "lemma": _cmd_lemma,
    "verify": _cmd_verify,
    "tightness": _cmd_tightness,
    "table": _cmd_table,
    "moments": _cmd_moments,
    "lln": _cmd_lln,
}


def run(config):
    """Execute one configured command and assemble its report."""
    return RunReport.assemble(config, HANDLERS[config.command](config))


def _global_options(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=default, help="master seed for sampled runs")
    parser.add_argument("--out", default=default, help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default=default)
    parser.add_argument("--tolerance", type=float, default=default, help="override float tolerances")
    parser.add_argument("--budget", type=int, default=default, help="node budget for exact searches")
    parser.add_argument("--config", default=default, help=f"JSON config file (or ${CONFIG_ENV})")
    parser.add_argument("--strict", action="store_true", default=default, help="treat inconclusive as failure")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="smallball", description="Exact checks of small-ball inequalities.")
    parser.add_argument("--version", action="version", version=f"smallball {__version__}")
    _global_options(parser, suppress=False)
    common = _Parser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("packing", parents=[common], help="packing number N(F, K)")
    p.add_argument("--f")
    p.add_argument("--k")
    p.add_argument("--carrier", help="carrier JSON, for set files without one")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact")
    mode.add_argument("--bounds", dest="mode", action="store_const", const="bounds")
    p.add_argument("--a")
    p.add_argument("--b")

    p = sub.add_parser("lemma", parents=[common], help="exhaustive multiset lemma sweeps")
    p.add_argument("lemma", nargs="?", choices=("3.1", "3.3", "4.1", "4.diff", "5.1", "turan", "katona"))
    p.add_argument("--sweep")
    p.add_argument("--s")
    p.add_argument("--a")
    p.add_argument("--b")

    p = sub.add_parser("verify", parents=[common], help="check one probabilistic bound")
    p.add_argument("theorem", nargs="?")
    p.add_argument("--dist", action="append")
    p.add_argument("--f")
    p.add_argument("--k")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--iid", action="store_true", default=None)
    p.add_argument("--hist")

    p = sub.add_parser("tightness", parents=[common], help="ratios of the near-extremal constructions")
    p.add_argument("--construction", choices=("dll", "ay", "symkat"))
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--n-min", dest="n_min", type=int)
    p.add_argument("--step", type=int)
    p.add_argument("--grid", type=int, nargs="+")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--delta")
    p.add_argument("--r")
    p.add_argument("--eps")
    p.add_argument("--emit", choices=("json", "csv"), help="alias of --format")

    p = sub.add_parser("table", parents=[common], help="certify the planar packing tables")
    p.add_argument("table", nargs="?", choices=("N+", "N-"))
    p.add_argument("--pitch")

    p = sub.add_parser("moments", parents=[common], help="moment inequalities")
    p.add_argument("check", nargs="?", choices=("holder", "kh", "unimodal", "reverse", "posdef"))
    p.add_argument("--dist", action="append")
    p.add_argument("--dist2")
    p.add_argument("--norms", help="first,second norm, e.g. l1,l2")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--phi", help="function desc as JSON, a file, or a name")
    p.add_argument("--sampler", help="sampler desc as JSON, a file, or a family name")
    p.add_argument("--samples", type=int)

    p = sub.add_parser("lln", parents=[common], help="empirical convergence of tuple counts")
    p.add_argument("--dist", action="append")
    p.add_argument("--tuples", help="JSON list of tuples or a file")
    p.add_argument("--k", dest="tuple_k", type=int)
    p.add_argument("--schedule", type=int, nargs="+")
    return parser


_GLOBALS = ("seed", "out", "format", "tolerance", "budget", "strict")


def config_from_args(argv, environ=None):
    """Merge command-line arguments over an optional config file."""
    environ = os.environ if environ is None else environ
    ns = vars(build_parser().parse_args(argv))
    config_path = ns.pop("config", None) or environ.get(CONFIG_ENV)
    base = load_config(config_path) if config_path else {"schema_version": SCHEMA_VERSION}
    command = ns.pop("command", None) or base.get("command")
    if command is None:
        raise UsageError("no command given (use one of: " + ", ".join(COMMANDS) + ")")
    if base.get("command") not in (None, command):
        base = dict(base, args={})
    emit_as = ns.pop("emit", None)
    settings = {key: ns.pop(key, None) for key in _GLOBALS}
    args = dict(base.get("args", {}))
    args.update({k: v for k, v in ns.items() if v is not None})
    merged = {key: base.get(key) for key in _GLOBALS}
    merged.update({k: v for k, v in settings.items() if v is not None})
    if emit_as:
        merged["format"] = emit_as
    return RunConfig(
        command=command,
        args=args,
        seed=merged["seed"],
        format=merged["format"] or "json",
        tolerance=merged["tolerance"],
        budget=merged["budget"] or DEFAULT_BUDGET,
        out=merged["out"],
        strict=bool(merged["strict"]),
    )


def main(argv=None):
    try:
        config = config_from_args(sys.argv[1:] if argv is None else argv)
        report = run(config)
        data = emit(report, config.format)
    except (UsageError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SmallBallError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if config.out:
        with open(config.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return report.exit_code(config.strict)


if __name__ == "__main__":
    sys.exit(main())
