"""Batch command-line front end. Every command writes one deterministic report.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 an axiom check
failed, 4 an internal consistency check failed.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import __version__, cohomology, fixtures, itpfi, lie
from .cocycles import CocycleError, PhaseCocyclePair, extension_group, parse_cocycle
from .groups import GroupValidationError, exact_factorizations, parse_group, standard_corpus
from .matched import MatchedPairError, action_properties, parse_matched_pair, verify_identities
from .monomial import fundamental_unitary
from .qgroup import AxiomError, full_report

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_AXIOM, EXIT_CONSISTENCY = 0, 1, 2, 3, 4

INPUT_ERRORS = (GroupValidationError, MatchedPairError, CocycleError, lie.LieError, itpfi.ScheduleError,
                itpfi.EvidenceError, cohomology.ScaleError, json.JSONDecodeError, OSError)


class UsageError(Exception):
    pass


class Outcome(Exception):
    """Carries a finished report with a nonzero exit status."""

    def __init__(self, code, result):
        super().__init__(code)
        self.code, self.result = code, result


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if x is None or isinstance(x, (str, float)):
        return x
    return str(x)


# -- inputs -------------------------------------------------------------------

class Inputs:
    """Loads input files and remembers their digests for the manifest."""

    def __init__(self):
        self.digests = {}

    def load(self, path: str):
        with open(path, "rb") as fh:
            data = fh.read()
        self.digests[os.path.basename(path)] = hashlib.sha256(data).hexdigest()
        return json.loads(data.decode())

    def group(self, spec: str):
        if not os.path.exists(spec):
            corpus = standard_corpus()
            if spec in corpus:
                self.digests[spec] = "builtin"
                return corpus[spec]
        return parse_group(self.load(spec))

    def pair(self, spec: str):
        if not os.path.exists(spec):
            stem = spec[:-5] if spec.endswith(".json") else spec
            if stem in fixtures.NAMED_PAIRS:
                self.digests[stem] = "builtin"
                return fixtures.NAMED_PAIRS[stem]()
        return parse_matched_pair(self.load(spec))


# -- commands -----------------------------------------------------------------

def cmd_factorize(args, inp):
    G = inp.group(args.group)
    rows = []
    for G1, G2 in exact_factorizations(G):
        rows.append({
            "g1": list(G1.elements), "g2": list(G2.elements),
            "g1_order": G1.order, "g2_order": G2.order,
            "g1_labels": [G.label(x) for x in G1.elements], "g2_labels": [G.label(x) for x in G2.elements],
        })
    return {"group": G.name, "order": G.order, "factorizations": rows, "count": len(rows)}


def cmd_matched(args, inp):
    mp = inp.pair(args.pair)
    bad = verify_identities(mp)
    props = action_properties(mp)
    out = {"group": mp.G.name, "g1": list(mp.G1.elements), "g2": list(mp.G2.elements),
           "alpha": mp.alpha, "beta": mp.beta, "properties": props,
           "identities_hold": not bad, "violations": bad[:20]}
    if bad:
        raise Outcome(EXIT_AXIOM, out)
    return out


def cmd_cocycles(args, inp):
    mp = inp.pair(args.pair)
    ext = extension_group(mp, args.n)
    doc = ext.to_document()
    doc["invariants"] = str(ext.invariants)
    doc["cocycle_group_order"] = ext.cocycle_group_order
    if ext.order <= args.max_classes:
        doc["classes"] = [{"coords": list(c), "representative": r.to_document()} for c, r in ext.all_classes()]
    return doc


def cmd_build(args, inp):
    mp = inp.pair(args.pair)
    if args.cocycle:
        c = parse_cocycle(inp.load(args.cocycle), mp)
        if c.N != args.n:
            raise CocycleError(f"cocycle has N = {c.N} but --n {args.n} was given")
    else:
        c = PhaseCocyclePair.trivial(mp, args.n)
    W, _ = fundamental_unitary(mp, c)
    rep = full_report(W)
    rep["n1"], rep["n2"], rep["N"] = mp.n1, mp.n2, args.n
    rep["all_axioms_hold"] = axioms_hold(rep, mp.n1 * mp.n2)
    if not rep["all_axioms_hold"]:
        raise Outcome(EXIT_AXIOM, rep)
    return rep


def axioms_hold(rep: dict, order: int) -> bool:
    """Every check of a ``full_report`` on an order-``order`` bicrossed product."""
    if not rep.get("pentagon"):
        return False
    return bool(rep["coassociative"] and rep["haar"]["unique"] and rep["haar"]["positive"] and rep["kac"]
                and rep["antipode"]["anti_homomorphism"] and rep["counit"]["unique"]
                and rep["counit"]["character"] and rep["haar_is_invariant_mean"]
                and all(rep["duality"].values()) and rep["regular_dimension"] == rep["dims"]["H"] ** 2
                and rep["dims"]["M"] == rep["dims"]["M_hat"] == order)


def cmd_cohomology(args, inp):
    G = inp.group(args.group)
    res = cohomology.cohomology_group(G, args.degree, args.n, args.max_cells)
    return res.to_document()


def cmd_kac_check(args, inp):
    mp = inp.pair(args.pair)
    rep = cohomology.kac_sequence_check(mp, args.n, args.max_cells)
    if not rep["exactness_consistent"]:
        raise Outcome(EXIT_CONSISTENCY, rep)
    return rep


def cmd_lie(args, inp):
    doc = inp.load(args.file)
    if args.action == "double":
        mp = lie.parse_matched_lie(doc)
        rep = lie.verify_matched_lie(mp)
        if not rep.ok:
            raise Outcome(EXIT_AXIOM, {"matched": rep.to_document()})
        D = lie.double_lie_algebra(mp)
        return {"matched": rep.to_document(), "double": D.to_document(),
                "jacobi": lie.verify_jacobi(D).to_document(),
                "restriction_consistent": lie.restriction_consistent(mp, D)}
    if "cobracket" in doc or "cobracket_tensor" in doc:
        kind, rep = "lie_bialgebra", lie.verify_lie_bialgebra(lie.parse_lie_bialgebra(doc))
    elif "dim" in doc:
        kind, rep = "lie_algebra", lie.verify_jacobi(lie.parse_lie_algebra(doc))
    else:
        kind, rep = "matched_pair", lie.verify_matched_lie(lie.parse_matched_lie(doc))
    out = {"kind": kind, "report": rep.to_document()}
    if not rep.ok:
        raise Outcome(EXIT_AXIOM, out)
    return out


def cmd_itpfi(args, inp):
    doc = inp.load(args.schedule)
    if args.action == "measure":
        if doc.get("family") != "prime_geometric":
            raise itpfi.ScheduleError("measure needs a prime family schedule")
        n_max = args.n_max if args.n_max is not None else int(doc.get("n_max", 20))
        return itpfi.invertible_measure(itpfi.parse_primes(doc["primes"]), n_max)
    s, ev, seq = itpfi.parse_schedule(doc)
    if seq is not None and "evidence" not in doc:
        try:
            return itpfi.classify_prime_family(seq, s.length, int(doc.get("k_max", 20)), args.C, args.delta,
                                               args.criterion3)
        except itpfi.ConsistencyError as exc:
            raise Outcome(EXIT_CONSISTENCY, {"error": str(exc)})
    ev2 = itpfi.parse_criterion2_evidence(doc)
    return itpfi.classify_type(s, ev, args.C, args.delta, args.criterion3, ev2).to_document()


def cmd_fixtures(args, inp):
    docs = fixtures.fixture_documents()
    if args.output is None:
        raise UsageError("fixtures needs --output")
    paths = fixtures.write_fixtures(args.output)
    return {"written": sorted(os.path.basename(p) for p in paths), "count": len(docs)}


# -- reports ------------------------------------------------------------------

def manifest(args, inp) -> dict:
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "output", "format", "command") and v is not None}
    return {
        "command": args.command + (f" {args.action}" if getattr(args, "action", None) else ""),
        "inputs": dict(sorted(inp.digests.items())),
        "parameters": params,
        "version": __version__,
        # fixed unless the caller supplies one, so reruns stay byte-identical
        "timestamp": os.environ.get("SOURCE_DATE_EPOCH"),
    }


def render(report: dict, fmt: str) -> str:
    report = _clean(report)
    if fmt == "structured":
        return json.dumps(report, sort_keys=True, indent=1) + "\n"
    lines = []

    def walk(prefix, x):
        if isinstance(x, dict):
            if not x:
                lines.append(f"{prefix}\t{{}}")
            for k in sorted(x):
                walk(f"{prefix}.{k}" if prefix else k, x[k])
        elif isinstance(x, list) and x and any(isinstance(v, (dict, list)) for v in x):
            for i, v in enumerate(x):
                walk(f"{prefix}[{i}]", v)
        else:
            lines.append(f"{prefix}\t{json.dumps(x, sort_keys=True)}")

    walk("", report)
    return "\n".join(lines) + "\n"


def emit_report(result: dict, man: dict, fmt: str, output: str | None, stem: str) -> str | None:
    """Write ``result`` with its manifest; atomic when writing to a directory."""
    text = render({"manifest": man, "result": result}, fmt)
    if output is None:
        sys.stdout.write(text)
        return None
    os.makedirs(output, exist_ok=True)
    path = os.path.join(output, stem + (".json" if fmt == "structured" else ".txt"))
    fd, tmp = tempfile.mkstemp(dir=output, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _stem(args) -> str:
    parts = [args.command]
    if getattr(args, "action", None):
        parts.append(args.action)
    for key in ("group", "pair", "file", "schedule"):
        v = getattr(args, key, None)
        if v:
            parts.append(os.path.splitext(os.path.basename(v))[0])
    if getattr(args, "cocycle", None):
        parts.append(os.path.splitext(os.path.basename(args.cocycle))[0])
    for key in ("degree", "n"):
        v = getattr(args, key, None)
        if v is not None:
            parts.append(f"{key}{v}")
    return "-".join(parts)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bicrossed", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument("--output", help="directory for the report (default: stdout)")
    common.add_argument("--format", choices=("structured", "tabular"), default="structured")
    common.add_argument("--seed", type=int, help="recorded in the manifest; never changes mathematical results")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("factorize", cmd_factorize, "list exact factorizations of a group")
    sp.add_argument("group", help="group file or corpus name")
    sp = add("matched", cmd_matched, "derive and verify the mutual actions of a pair")
    sp.add_argument("pair")
    sp = add("cocycles", cmd_cocycles, "extension group and class representatives")
    sp.add_argument("pair")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-classes", type=int, default=64)
    sp = add("build", cmd_build, "construct W and run every axiom check")
    sp.add_argument("pair")
    sp.add_argument("--cocycle")
    sp.add_argument("--n", type=int, required=True)
    sp = add("cohomology", cmd_cohomology, "H^n(G, Z/N)")
    sp.add_argument("group")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-cells", type=int, default=cohomology.DEFAULT_MAX_CELLS)
    sp = add("kac-check", cmd_kac_check, "compare the extension group with the exact sequence")
    sp.add_argument("pair")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-cells", type=int, default=cohomology.DEFAULT_MAX_CELLS)
    sp = add("lie", cmd_lie, "Lie algebra, matched pair or bialgebra checks")
    sp.add_argument("action", choices=("verify", "double"))
    sp.add_argument("file")
    sp = add("itpfi", cmd_itpfi, "type classification and invertible measure")
    sp.add_argument("action", choices=("classify", "measure"))
    sp.add_argument("schedule")
    sp.add_argument("--C", type=Fraction, default=Fraction(1))
    sp.add_argument("--delta", type=Fraction, default=Fraction(1, 2))
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--criterion3", choices=("weighted", "unweighted"), default="weighted",
                    help="reading of the third series; 'unweighted' exists to exercise the cross-check")
    add("fixtures", cmd_fixtures, "write the fixture files into --output")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    for key in ("n", "degree"):
        v = getattr(args, key, None)
        if v is not None and v < (1 if key == "n" else 0):
            sys.stderr.write(f"invalid input: --{key} out of range\n")
            return EXIT_INPUT
    inp = Inputs()
    code = EXIT_OK
    try:
        result = args.func(args, inp)
    except Outcome as out:
        code, result = out.code, out.result
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except itpfi.ConsistencyError as exc:
        sys.stderr.write(f"consistency failure: {exc}\n")
        return EXIT_CONSISTENCY
    except AxiomError as exc:
        sys.stderr.write(f"axiom failure: {exc}\n")
        return EXIT_AXIOM
    except INPUT_ERRORS + (KeyError, TypeError, ValueError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INPUT
    if args.command == "fixtures" and code == EXIT_OK:
        sys.stdout.write(render(result, "structured"))
        return code
    path = emit_report(result, manifest(args, inp), args.format, args.output, _stem(args))
    if path:
        sys.stdout.write(path + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
