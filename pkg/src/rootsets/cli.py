"""Batch front door: JSON group/tower spec documents in, JSON reports out.

Exit codes: 0 computed and all checked assertions passed, 2 computed with
reported disagreements (e.g. a theory-tag mismatch), 1 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .catalog import cyclic
from .constructions import (
    CocycleTable,
    central_extension,
    heisenberg,
    omega1_census,
    quaternion_reduce,
    tree_vw_group,
)
from .eta import (
    PreconditionError,
    check_lemma31,
    check_lemma32,
    check_lemma39,
    check_eta_automorphism_invariance,
    eta,
    k_finite,
    lemma38_decide,
    roots_matrix,
)
from .kernel import (
    GroupError,
    InvalidElementError,
    closure,
    direct_product,
    dumps_table,
    load_table,
    quotient,
    validate_automorphism,
)
from .report import PASS
from .towers import (
    PruferTower,
    QuaternionTower,
    QuotientTower,
    T1Tower,
    T2Tower,
    eta_stabilized,
    inversion_recipe,
    k_estimate,
)

GROUP_KINDS = {"table", "cyclic", "direct_product", "heisenberg",
               "cocycle_extension", "tree_vw", "quotient"}
TOWER_KINDS = {"prufer_tower", "t1_tower", "t2_tower", "quaternion_tower",
               "quotient_tower"}


class SpecError(Exception):
    def __init__(self, errors):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


@dataclass
class GroupSpecDocument:
    kind: str
    params: dict
    label: str = None

    def to_json(self):
        doc = {"kind": self.kind, **self.params}
        if self.label:
            doc["label"] = self.label
        return doc


def _is_prime(p):
    return isinstance(p, int) and p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def _validate(doc, errors, base_dir, path="spec"):
    if not isinstance(doc, dict):
        errors.append(f"{path}: expected an object")
        return None
    kind = doc.get("kind")
    if kind not in GROUP_KINDS | TOWER_KINDS:
        errors.append(f"{path}: unknown kind {kind!r}")
        return None
    params = {k: v for k, v in doc.items() if k not in ("kind", "label")}
    label = doc.get("label")

    def need(key, check, message):
        if key not in params:
            errors.append(f"{path}.{key}: missing")
            return None
        if not check(params[key]):
            errors.append(f"{path}.{key}: {message} (got {params[key]!r})")
            return None
        return params[key]

    if kind == "table":
        p = need("path", lambda v: isinstance(v, str), "expected a file path")
        if p is not None and not (base_dir / p).is_file():
            errors.append(f"{path}.path: file not found: {p}")
    elif kind == "cyclic":
        need("n", lambda v: isinstance(v, int) and v >= 1, "expected an integer >= 1")
    elif kind == "direct_product":
        for side in ("left", "right"):
            sub = params.get(side)
            if sub is None:
                errors.append(f"{path}.{side}: missing")
            else:
                _validate(sub, errors, base_dir, f"{path}.{side}")
    elif kind == "heisenberg":
        p = need("p", _is_prime, "expected a prime")
        if p is not None and p == 2:
            errors.append(f"{path}.p: must be odd (no nonabelian exponent-2 group)")
    elif kind == "cocycle_extension":
        if "base" in params:
            _validate(params["base"], errors, base_dir, f"{path}.base")
        else:
            errors.append(f"{path}.base: missing")
        need("p", _is_prime, "expected a prime")
        need("w", lambda v: isinstance(v, list), "expected a matrix of rows")
    elif kind == "tree_vw":
        need("depth", lambda v: isinstance(v, int) and 1 <= v <= 4, "expected depth 1..4")
    elif kind == "quotient":
        if "group" in params:
            _validate(params["group"], errors, base_dir, f"{path}.group")
        else:
            errors.append(f"{path}.group: missing")
        need("normal", lambda v: isinstance(v, list) and all(isinstance(x, str) for x in v),
             "expected a list of element names")
    elif kind == "prufer_tower":
        need("p", _is_prime, "expected a prime")
    elif kind == "t1_tower":
        if "H" in params:
            _validate(params["H"], errors, base_dir, f"{path}.H")
        else:
            errors.append(f"{path}.H: missing")
        need("p", _is_prime, "expected a prime")
        need("a_gen", lambda v: isinstance(v, str), "expected an element name")
    elif kind == "t2_tower":
        sub = params.get("base")
        if sub is None:
            errors.append(f"{path}.base: missing")
        else:
            _validate(sub, errors, base_dir, f"{path}.base")
            if isinstance(sub, dict) and sub.get("kind") not in ("t1_tower", "prufer_tower"):
                errors.append(f"{path}.base: must be a t1_tower or prufer_tower")
        need("y", lambda v: isinstance(v, str), "expected an element name")
        need("m", lambda v: isinstance(v, int) and v >= 1, "expected an integer >= 1")
        alpha = params.get("alpha")
        if alpha is None:
            errors.append(f"{path}.alpha: missing")
        elif alpha != "inversion" and not isinstance(alpha, dict):
            errors.append(f"{path}.alpha: expected \"inversion\" or a recipe object")
    elif kind == "quaternion_tower":
        pass
    elif kind == "quotient_tower":
        sub = params.get("base")
        if sub is None:
            errors.append(f"{path}.base: missing")
        else:
            _validate(sub, errors, base_dir, f"{path}.base")
            if isinstance(sub, dict) and sub.get("kind") not in TOWER_KINDS:
                errors.append(f"{path}.base: must be a tower document")
        need("normal", lambda v: isinstance(v, list) and all(isinstance(x, str) for x in v),
             "expected a list of element names")
    return GroupSpecDocument(kind, params, label)


def parse_spec(text, base_dir="."):
    """Parse and validate a spec document, collecting all validation errors."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError([f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"])
    errors = []
    parsed = _validate(doc, errors, Path(base_dir))
    if errors:
        raise SpecError(errors)
    return parsed


def _parse_fraction(text):
    if "/" in text:
        num, den = text.split("/", 1)
        return int(num), int(den)
    return int(text), 1


def build_group(spec, base_dir="."):
    base_dir = Path(base_dir)
    kind, params = spec.kind, spec.params
    if kind == "table":
        return load_table(base_dir / params["path"])
    if kind == "cyclic":
        return cyclic(params["n"])
    if kind == "direct_product":
        left = build_group(_reparse(params["left"], base_dir), base_dir)
        right = build_group(_reparse(params["right"], base_dir), base_dir)
        return direct_product(left, right)
    if kind == "heisenberg":
        return heisenberg(params["p"])
    if kind == "cocycle_extension":
        base = build_group(_reparse(params["base"], base_dir), base_dir)
        return central_extension(CocycleTable.of(base, params["p"], params["w"]))
    if kind == "tree_vw":
        return tree_vw_group(params["depth"])
    if kind == "quotient":
        G = build_group(_reparse(params["group"], base_dir), base_dir)
        N = closure(G, [G.id_of(nm) for nm in params["normal"]])
        return quotient(G, N)[0]
    raise SpecError([f"{kind} is a tower kind, not a finite-group kind"])


def build_tower(spec, base_dir="."):
    base_dir = Path(base_dir)
    kind, params = spec.kind, spec.params
    if kind == "prufer_tower":
        return PruferTower(params["p"])
    if kind == "t1_tower":
        H = build_group(_reparse(params["H"], base_dir), base_dir)
        return T1Tower(H, params["p"], H.id_of(params["a_gen"]),
                       label=spec.label or "")
    if kind == "t2_tower":
        base = build_tower(_reparse(params["base"], base_dir), base_dir)
        alpha = params["alpha"]
        if alpha == "inversion":
            recipe = inversion_recipe(base)
        else:
            recipe = {rep: (tgt, _parse_fraction(frac))
                      for rep, (tgt, frac) in alpha.items()}
        return T2Tower(base, params["y"], params["m"], recipe,
                       label=spec.label or "")
    if kind == "quaternion_tower":
        return QuaternionTower()
    if kind == "quotient_tower":
        base = build_tower(_reparse(params["base"], base_dir), base_dir)
        return QuotientTower(base, params["normal"], label=spec.label or "")
    raise SpecError([f"{kind} is a finite-group kind, not a tower kind"])


def _reparse(doc, base_dir):
    errors = []
    parsed = _validate(doc, errors, Path(base_dir))
    if errors:
        raise SpecError(errors)
    return parsed


# ---------------------------------------------------------------------------
# commands

def _cmd_eta(spec, flags, base_dir):
    element = flags.get("element")
    if not element:
        raise SpecError(["eta requires --element"])
    assertions = []
    if spec.kind in TOWER_KINDS:
        tower = build_tower(spec, base_dir)
        rep = eta_stabilized(tower, element,
                             max_level=flags.get("max_level", 8),
                             window=flags.get("window", 2))
        assertions.append({"name": "eta-coherence", "status": PASS})
        result = rep.to_json()
    else:
        G = build_group(spec, base_dir)
        es = eta(G, G.id_of(element))
        result = {"element": element, "size": len(es),
                  "members": sorted(es.members.names())}
        assertions.append({"name": "target-not-in-eta",
                           "status": PASS if G.id_of(element) not in es else "fail"})
    return result, assertions


def _cmd_k_estimate(spec, flags, base_dir):
    assertions = []
    if spec.kind in TOWER_KINDS:
        tower = build_tower(spec, base_dir)
        rep = k_estimate(tower,
                         max_level=flags.get("max_level", 8),
                         window=flags.get("window", 2),
                         birth_cap=flags.get("birth_cap", 4))
        result = rep.to_json()
        if rep.agrees is not None:
            assertions.append({"name": "matches-theory",
                               "status": PASS if rep.agrees else "fail",
                               **({} if rep.agrees else
                                  {"witness": {"members": rep.members, "theory": rep.theory}})})
    else:
        G = build_group(spec, base_dir)
        rep = k_finite(G)
        result = {"members": sorted(rep.members.names()), "warning": rep.warning}
        assertions.append({"name": "k-finite-degenerate-whole-group",
                           "status": PASS if len(rep.members) == G.order else "fail"})
    return result, assertions


def _lemma33_suite(G):
    """Run the automorphism invariance check over all inner automorphisms."""
    ok = True
    for h in G.elements():
        hi = G.inv(h)
        mapping = [G.mul(G.mul(hi, g), h) for g in G.elements()]
        alpha = validate_automorphism(G, mapping)
        for a in G.elements():
            rep = check_eta_automorphism_invariance(G, a, alpha)
            if any(x.status == "fail" for x in rep.assertions):
                ok = False
    return ok


def _lemma38_suite(G):
    R = roots_matrix(G)
    for a in G.elements():
        for h in G.elements():
            try:
                predicted = lemma38_decide(G, a, h)
            except PreconditionError:
                continue
            if predicted != bool(R[G.mul(a, h), a]):
                return False, (G.names[a], G.names[h])
    return True, None


def _cmd_lemmas(spec_paths, flags, base_dir):
    suite = flags.get("suite")
    if suite not in ("3.1", "3.2", "3.3", "3.8", "3.9"):
        raise SpecError([f"unknown lemma suite {suite!r}"])
    assertions = []
    result = {"suite": suite, "groups": []}
    for path in spec_paths:
        spec = parse_spec(Path(path).read_text(encoding="utf-8"), base_dir)
        G = build_group(spec, base_dir)
        label = spec.label or G.label or Path(path).stem
        result["groups"].append(label)
        if suite == "3.1":
            rep = check_lemma31(G)
            for a in rep.assertions:
                assertions.append({"name": f"{label}:{a.name}", "status": a.status})
        elif suite == "3.2":
            rep = check_lemma32(G)
            for a in rep.assertions:
                assertions.append({"name": f"{label}:{a.name}", "status": a.status})
        elif suite == "3.3":
            ok = _lemma33_suite(G)
            assertions.append({"name": f"{label}:inner-automorphism-invariance",
                               "status": PASS if ok else "fail"})
        elif suite == "3.8":
            ok, wit = _lemma38_suite(G)
            assertions.append({"name": f"{label}:closed-form-vs-brute-force",
                               "status": PASS if ok else "fail",
                               **({} if ok else {"witness": wit})})
        elif suite == "3.9":
            primes = sorted({p for p in range(2, G.order + 1)
                             if _is_prime(p) and G.order % p == 0})
            for p in primes:
                rep = check_lemma39(G, p)
                for a in rep.assertions:
                    assertions.append({"name": f"{label}:p={p}:{a.name}",
                                       "status": a.status})
    return result, assertions


def _cmd_reduce_t2(spec, flags, base_dir):
    tower = build_tower(spec, base_dir)
    level = flags.get("level")
    if level is None:
        raise SpecError(["reduce-t2 requires --level"])
    trace = quaternion_reduce(tower, level, verify_next_level=True)
    result = trace.to_json()
    assertions = [
        {"name": "generalized-quaternion-recognizer",
         "status": PASS if trace.recognizer_passed else "fail"},
        {"name": "eta-of-a-trivial", "status": PASS if trace.eta_trivial else "fail"},
        {"name": "level-independent",
         "status": PASS if trace.level_independent else "fail"},
    ]
    return result, assertions


def _cmd_omega1_census(spec, flags, base_dir):
    depth = flags.get("depth")
    if depth is None:
        if spec is not None and spec.kind == "tree_vw":
            depth = spec.params["depth"]
        else:
            raise SpecError(["omega1-census requires --depth or a tree_vw spec"])
    rep = omega1_census(depth)
    return rep.result, [a.to_json() for a in rep.assertions]


def _cmd_emit_table(spec, flags, base_dir):
    out = flags.get("out")
    if not out:
        raise SpecError(["emit-table requires --out"])
    G = build_group(spec, base_dir)
    text = dumps_table(G)
    Path(out).write_text(text, encoding="utf-8")
    return {"path": str(out), "order": G.order}, []


def run_command(command, spec, flags, *, base_dir=".", spec_paths=None):
    """Dispatch a command and wrap the outcome in the canonical report shape.

    Returns (report dict, exit code).  The canonical body is timestamp-free;
    timing lives in the metadata field, which comparison mode excludes.
    """
    start = time.perf_counter()
    try:
        if command == "eta":
            result, assertions = _cmd_eta(spec, flags, base_dir)
        elif command == "k-estimate":
            result, assertions = _cmd_k_estimate(spec, flags, base_dir)
        elif command == "lemmas":
            result, assertions = _cmd_lemmas(spec_paths, flags, base_dir)
        elif command == "reduce-t2":
            result, assertions = _cmd_reduce_t2(spec, flags, base_dir)
        elif command == "omega1-census":
            result, assertions = _cmd_omega1_census(spec, flags, base_dir)
        elif command == "emit-table":
            result, assertions = _cmd_emit_table(spec, flags, base_dir)
        else:
            raise SpecError([f"unknown command {command!r}"])
    except SpecError as exc:
        report = {"command": command, "errors": exc.errors}
        return report, 1
    except (GroupError, InvalidElementError, OSError) as exc:
        report = {"command": command, "errors": [str(exc)]}
        return report, 1
    assertions = [a if isinstance(a, dict) else a.to_json() for a in assertions]
    report = {
        "spec": spec.to_json() if spec is not None else None,
        "command": command,
        "flags": {k: v for k, v in sorted(flags.items()) if v is not None},
        "result": result,
        "assertions": assertions,
        "metadata": {"tool_version": __version__,
                     "timing_seconds": round(time.perf_counter() - start, 6)},
    }
    code = 0 if all(a["status"] == PASS for a in assertions) else 2
    return report, code


def _load_spec_arg(path):
    """A spec path: a single JSON document, or a directory of them (lemmas)."""
    p = Path(path)
    if p.is_dir():
        return None, sorted(p.glob("*.json")), p
    return parse_spec(p.read_text(encoding="utf-8"), p.parent), [p], p.parent


def main(argv=None):
    parser = argparse.ArgumentParser(prog="rootsets",
                                     description="Root sets and the K subgroup in "
                                     "finite groups and towers of finite groups.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument("spec", help="path to a JSON spec document")
        return sp

    sp = add("eta", help="level-wise eta with stabilization certificate")
    sp.add_argument("--element", required=True)
    sp.add_argument("--max-level", type=int, default=8)
    sp.add_argument("--window", type=int, default=2)

    sp = add("k-estimate", help="stabilized-element estimate of K")
    sp.add_argument("--max-level", type=int, default=8)
    sp.add_argument("--window", type=int, default=2)
    sp.add_argument("--birth-cap", type=int, default=4)

    sp = add("lemmas", help="run a lemma suite on a group spec or directory of specs")
    sp.add_argument("--suite", required=True, choices=["3.1", "3.2", "3.3", "3.8", "3.9"])

    sp = add("reduce-t2", help="generalized quaternion reduction of a t2 tower")
    sp.add_argument("--level", type=int, required=True)

    sp = add("omega1-census", help="order-2 census of the tree group")
    sp.add_argument("--depth", type=int)

    sp = add("emit-table", help="write the group as a Cayley table file")
    sp.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "spec")}
    flags = {k.replace("-", "_"): v for k, v in flags.items()}
    try:
        spec, spec_paths, base_dir = _load_spec_arg(args.spec)
    except (SpecError, OSError) as exc:
        errors = exc.errors if isinstance(exc, SpecError) else [str(exc)]
        print(json.dumps({"command": args.command, "errors": errors},
                         indent=2, sort_keys=True))
        return 1
    if args.command == "lemmas" and spec is not None:
        spec = None  # lemmas always runs over the file list
    report, code = run_command(args.command, spec, flags,
                               base_dir=base_dir, spec_paths=spec_paths)
    print(json.dumps(report, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
