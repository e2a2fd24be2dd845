"""Command line front end.

Every run prints a report whose body depends only on argv and the encoding
convention; the trailing ``# time`` line is the only varying output.

Exit codes: 0 success, 2 usage, 3 domain error, 4 size limit.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import integral, matrioshka, metric, tower
from .errors import ProfiniteError, SizeLimit, Usage

VERBS = ("tower", "encode", "decode", "dist", "blocks", "integral",
         "partition", "correlate", "validate")


@dataclass
class Command:
    verb: str
    args: dict
    input_files: list = field(default_factory=list)


@dataclass
class RunReport:
    convention_version: str
    tower_spec: str
    results: list
    elapsed: float = 0.0
    exit_status: int = 0

    def body(self) -> str:
        lines = [f"conv={self.convention_version}", f"tower: {self.tower_spec}"]
        lines += self.results
        lines.append(f"exit: {self.exit_status}")
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        return self.body() + f"# time {self.elapsed:.6f}s\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise Usage(message)


def _build_parser():
    parser = _Parser(prog="profinite", add_help=False)
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser)

    def with_tower(p):
        p.add_argument("--tower")
        p.add_argument("--tower-file")
        p.add_argument("--depth", type=int)
        p.add_argument("--p", type=int)
        return p

    with_tower(sub.add_parser("tower", add_help=False))
    with_tower(sub.add_parser("validate", add_help=False))
    p = with_tower(sub.add_parser("encode", add_help=False))
    p.add_argument("--element", required=True)
    p = with_tower(sub.add_parser("blocks", add_help=False))
    p.add_argument("--element", required=True)
    p = with_tower(sub.add_parser("decode", add_help=False))
    p.add_argument("--bits", required=True)
    p = sub.add_parser("dist", add_help=False)
    p.add_argument("metric", choices=["cantor", "hamming"])
    p.add_argument("w1")
    p.add_argument("w2")
    p = with_tower(sub.add_parser("integral", add_help=False))
    p.add_argument("--w", nargs="+")
    p.add_argument("--hbar", default="1")
    p.add_argument("--action")
    p.add_argument("--n", type=int)
    p.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p = with_tower(sub.add_parser("partition", add_help=False))
    p.add_argument("--lambda", dest="lam", required=True, type=float)
    p = with_tower(sub.add_parser("correlate", add_help=False))
    p.add_argument("--primes", required=True)
    p.add_argument("--lambda", dest="lam", default=0.0, type=float)
    return parser


def parse_command(argv) -> Command:
    argv = list(argv)
    if not argv:
        raise Usage("missing verb")
    if argv[0] not in VERBS:
        raise Usage(f"unknown verb {argv[0]!r}")
    ns = vars(_build_parser().parse_args(argv))
    verb = ns.pop("verb")
    files = [ns[k] for k in ("tower_file", "action") if ns.get(k)]
    if verb != "dist" and not (ns.get("tower") or ns.get("tower_file")):
        raise Usage(f"{verb} needs --tower or --tower-file")
    if verb == "integral":
        if not (ns["w"] or ns["action"]):
            raise Usage("integral needs --w or --action")
        if ns["mode"] == "mc" and ns["seed"] is None:
            raise Usage("--mode mc requires an explicit --seed")
    return Command(verb, ns, files)


def _tower_from(args) -> tower.Tower:
    if args.get("tower_file"):
        return tower.read_tower_file(args["tower_file"])
    spec = args["tower"].split()
    if spec[0] == "tower":
        spec = spec[1:]
    if args.get("depth") is not None:
        spec.append(f"depth={args['depth']}")
    if args.get("p") is not None:
        spec.append(f"p={args['p']}")
    return tower.parse_tower_spec(" ".join(spec))


def split_element(text: str) -> list[str]:
    """Split ``a,b,c`` on commas outside brackets, so ``(0,1),(2,3)`` works."""
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    out.append(cur.strip())
    return out


def fmt(x: float) -> str:
    s = format(x, ".15g")
    return "0" if s == "-0" else s


def fmt_complex(z: complex) -> str:
    sign = "-" if z.imag < 0 else "+"
    return f"{fmt(z.real)} {sign} {fmt(abs(z.imag))}i"


def fmt_frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _run(cmd: Command):
    a = cmd.args
    if cmd.verb == "dist":
        if a["metric"] == "cantor":
            return "-", [f"d = {fmt_frac(metric.cantor_distance(a['w1'], a['w2']))}"]
        return "-", [f"d = {metric.hamming(a['w1'], a['w2'])}"]

    T = _tower_from(a)
    res = []
    if cmd.verb == "tower":
        for k, G in enumerate(T.levels, start=1):
            res.append(f"level {k}: {G.key} order={G.order}")
    elif cmd.verb == "validate":
        for c in tower.validate_tower(T):
            res.append(f"bond {c.level}: surjective={c.surjective} "
                       f"homomorphism={c.homomorphism} strict={c.strict_refinement}")
        res.append(f"valid = {all(c.ok for c in tower.validate_tower(T))}")
    elif cmd.verb == "encode":
        x = tower.coherent_element(T, split_element(a["element"]))
        code = matrioshka.encode(matrioshka.build_partition_tree(T), x)
        res += [f"code = {code.bits}", matrioshka.serialize_code(T, code)]
    elif cmd.verb == "decode":
        out = matrioshka.decode(matrioshka.build_partition_tree(T), a["bits"])
        if isinstance(out, tower.CoherentElement):
            res.append(f"element = {','.join(out.labels)}")
        else:
            res.append(f"cell level {out.level} = {{{','.join(out.labels)}}}")
    elif cmd.verb == "blocks":
        x = tower.coherent_element(T, split_element(a["element"]))
        code = matrioshka.block_encode(T, x)
        res.append(f"blocks = {code}")
        res.append(f"widths = {','.join(map(str, code.widths))}")
        for k in range(2, T.depth + 1):
            ok = matrioshka.block_truncate(code, k) == code.stripped(k - 1)
            res.append(f"coherent {k}->{k - 1} = {ok}")
        res.append(matrioshka.serialize_code(T, code))
    elif cmd.verb == "integral":
        if a["action"]:
            S = integral.read_action_file(a["action"])
        else:
            S = integral.action(a["w"], hbar=float(Fraction(a["hbar"])))
        mu = integral.haar_measure(T)
        n = a["n"]
        if n is None:
            n = S.dimension if T.kind_tag == "binary" else T.depth
        if a["mode"] == "exact":
            r = integral.path_integral(mu, S, "exact", n)
            delta = "n/a" if r.delta_prev is None else fmt(r.delta_prev)
            res.append(f"I_{n} = {fmt_complex(r.value)}  delta = {delta}")
        else:
            r = integral.path_integral(mu, S, "monte_carlo", n, samples=a["samples"], seed=a["seed"])
            res.append(f"I_{n} = {fmt_complex(r.value)}  stderr = {fmt(r.stderr)}  "
                       f"samples = {r.samples}  seed = {r.seed}")
    elif cmd.verb == "partition":
        res.append(f"Z = {fmt(integral.partition_function(T, a['lam']))}")
    elif cmd.verb == "correlate":
        primes = [int(q) for q in a["primes"].split(",") if q.strip()]
        z = integral.frobenius_correlation(T, primes, a["lam"])
        name = " ".join(f"alpha_{q}" for q in primes)
        res.append(f"<{name}> = {fmt_complex(z)}")
    return T.spec, res


def execute(cmd: Command) -> RunReport:
    start = time.perf_counter()
    spec = cmd.args.get("tower") or cmd.args.get("tower_file") or "-"
    try:
        spec, results = _run(cmd)
        status = 0
    except SizeLimit as e:
        results, status = [f"error: SizeLimit: {e}"], 4
    except ProfiniteError as e:
        results, status = [f"error: {type(e).__name__}: {e}"], 3
    except (KeyError, ValueError) as e:
        results, status = [f"error: {type(e).__name__}: {e}"], 3
    return RunReport(matrioshka.CONVENTION_VERSION, spec, results,
                     time.perf_counter() - start, status)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse_command(argv)
    except Usage as e:
        print(f"error: Usage: {e}", file=sys.stderr)
        print(f"usage: profinite {{{','.join(VERBS)}}} ...", file=sys.stderr)
        return 2
    report = execute(cmd)
    sys.stdout.write(report.render())
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
