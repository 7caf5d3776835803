"""Golden cases for the command line.

Each case pairs an argv with an independent library expression.  The frozen
file ``data/cli_golden.json`` records the text output, the exit code and
the library value; the check re-runs the CLI (text and ``--json``) and
requires both to match, and the JSON result to equal the library value.

Library expressions are nested lists ``["module.function", arg, ...]``
resolved inside this package.  String arguments carry a type prefix:
``set:``, ``tree:``, ``formula:``; ``["list", ...]`` builds a list.
Regenerate the file with ``python -m setcalc.goldens``.
"""

from __future__ import annotations

import importlib
import json
import re
from pathlib import Path
from typing import Any, List

from .folang.syntax import Formula, print_formula
from .kernel import HFSet, parse_set, print_set
from .trees import Tree, parse_tree, tree_to_json

DATA = Path(__file__).with_name("data") / "cli_golden.json"

TWO_CODE = "\n1\n1/1\n2\n"  # labels {1, 2}: node 1 -> 1, node 2 -> 0; collapses to 2
ONE_A = "1"
ONE_B = "\n2\n"
FAMILY_TREE = "1;1/2"

# the root-only tree first, then codes of 1, 1, 2, 2, 2
UNIVERSE = "---\n".join(["# labels: 1 2\n", "1\n", "2\n", "1;1/1\n", "2;2/2\n", "1;2\n"])

CASES: List[dict] = [
    {"argv": ["pair", "{}", "{{}}"], "library": ["flatcode.flat_pair", "set:0", "set:1"]},
    {"argv": ["pair", "--a-file", "a.set", "--b-file", "b.set"], "files": {"a.set": "1\n", "b.set": "{1}\n"},
     "library": ["flatcode.flat_pair", "set:1", "set:{1}"]},
    {"argv": ["tuple", "1", "0", "2"], "library": ["flatcode.flat_tuple", ["list", "set:1", "set:0", "set:2"]]},
    {"argv": ["lh", "{{0,2},{0}}"], "library": ["flatcode.lh", "set:{{0,2},{0}}"]},
    {"argv": ["lh", "1"], "library": ["flatcode.lh", "set:1"]},
    {"argv": ["concat", "1", "1"], "library": ["flatcode.concat", "set:1", "set:1"]},
    {"argv": ["prod", "2", "1"], "library": ["flatcode.flat_prod", "set:2", "set:1"]},
    {"argv": ["dom", "{{1}}"], "library": ["flatcode.dom", "set:{{1}}"]},
    {"argv": ["ran", "{{1}}"], "library": ["flatcode.ran", "set:{{1}}"]},
    {"argv": ["slice", "{{1}}", "0"], "library": ["flatcode.slice_", "set:{{1}}", "set:0"]},
    {"argv": ["dunion", "1", "1"], "library": ["flatcode.disjoint_union", "set:1", "set:1"]},
    {"argv": ["collapse", "--tree-file", "t.tree"], "files": {"t.tree": TWO_CODE},
     "library": ["trees.tcoll", "tree:" + TWO_CODE]},
    {"argv": ["collapse", "1;1/1;1/2"], "library": ["trees.tcoll", "tree:1;1/1;1/2"]},
    {"argv": ["encode", "2"], "library": ["cli.encode_set", "set:2"]},
    {"argv": ["encode", "{1}", "--labels", "4"], "library": ["cli.encode_set", "set:{1}", 4]},
    {"argv": ["encode", "0", "--labels", "1"]},
    {"argv": ["trcltree", "t.tree"], "files": {"t.tree": TWO_CODE}, "library": ["trees.trcl_tree", "tree:" + TWO_CODE]},
    {"argv": ["singleton", "1"], "library": ["trees.singleton_tree", "tree:1"]},
    {"argv": ["join", "--branch", "1", "1", "--branch", "2", "2;2/1"],
     "library": ["trees.join_tree", ["dict", "set:1", "tree:1", "set:2", "tree:2;2/1"]]},
    {"argv": ["bisim", "a.tree", "b.tree"], "files": {"a.tree": ONE_A, "b.tree": ONE_B},
     "library": ["bisim.eq_star", "tree:" + ONE_A, "tree:" + ONE_B]},
    {"argv": ["bisim", "1", "1;1/1"], "library": ["bisim.eq_star", "tree:1", "tree:1;1/1"]},
    {"argv": ["member", "1", "1;1/1"], "library": ["bisim.in_star", "tree:1", "tree:1;1/1"]},
    {"argv": ["theta", "{0,{1},3}"], "library": ["hx.theta", "set:{0,{1},3}"]},
    {"argv": ["hx", "3", "--rank", "4"], "library": ["hx_members", ["set:3"], 4]},
    {"argv": ["hx", "2", "--rank", "3"], "library": ["hx_members", ["set:2"], 3]},
    {"argv": ["translate", "exists y. y in x & not y = x"],
     "library": ["folang.translate", "formula:exists y. y in x & not y = x"]},
    {"argv": ["translate", "--literal", "exists y. y in x"],
     "library": ["folang.translate", "formula:exists y. y in x", True]},
    {"argv": ["translate", "--unbound", "forall z in x. z = y"],
     "library": ["folang.translate", ["folang.unbound", "formula:forall z in x. z = y"]]},
    {"argv": ["translate", "forall z in x. z = y"]},
    {"argv": ["eval", "exists z. z in x & x in y", "--assign", "x=0", "--assign", "y=2"],
     "library": ["eval_hf", "formula:exists z. z in x & x in y", 3, {"x": "set:0", "y": "set:2"}]},
    {"argv": ["eval", "--formula-file", "phi.txt", "--rank", "4", "--assign", "x=3"],
     "files": {"phi.txt": "forall y in x. exists z in x. y in z | y = z\n"},
     "library": ["eval_hf", "formula:forall y in x. exists z in x. y in z | y = z", 4, {"x": "set:3"}]},
    {"argv": ["delta0", "forall y in x. y in omega"], "library": ["folang.is_delta0", "formula:forall y in x. y in omega"]},
    {"argv": ["delta0", "exists y. y in x"], "library": ["folang.is_delta0", "formula:exists y. y in x"]},
    {"argv": ["delta0", "--builtin", "concat_graph"],
     "library": ["folang.is_delta0", ["folang.builtin_formula", "concat_graph"]]},
    {"argv": ["transfer-check", "u.trees", "--permute", "1=2", "--permute", "2=1", "--pool-size", "4"],
     "files": {"u.trees": UNIVERSE},
     "library": ["transfer_report", UNIVERSE, {"1": "2", "2": "1"}, None, 4]},
    {"argv": ["transfer-check", "u.trees", "--map", "1=0", "--formula", "x in y", "--formula", "exists z. z in x"],
     "files": {"u.trees": UNIVERSE},
     "library": ["transfer_report", UNIVERSE, None, {"1": 0}, ["list", "formula:x in y", "formula:exists z. z in x"]]},
    {"argv": ["cofinal-witness", FAMILY_TREE, "--slice", "1", FAMILY_TREE, "--slice", "2", "1"],
     "library": ["cofinal", FAMILY_TREE, {"1": FAMILY_TREE, "2": "1"}, None], "project": "witness"},
    {"argv": ["cofinal-witness", FAMILY_TREE, "--slice", "1", "2;2/1", "--permute", "1=2", "--permute", "2=1"],
     "library": ["cofinal", FAMILY_TREE, {"1": "2;2/1"}, {"1": "2", "2": "1"}], "project": "witness"},
    {"argv": ["selftest", "--only", "2", "--only", "3"], "library": ["suite_verdicts", [2, 3]], "project": "verdicts",
     "stdout_regex": True},
    {"argv": ["pair", "1"]},
    {"argv": ["frobnicate"]},
]


# --- library expressions -----------------------------------------------------


def _atom(text: str) -> Any:
    kind, _, body = text.partition(":")
    if kind == "set":
        return parse_set(body)
    if kind == "tree":
        return parse_tree(body)
    if kind == "formula":
        from .folang import parse_formula

        return parse_formula(body)
    return text


def _hx_members(base, rank):
    from .hx import h_of
    from .kernel import mk_set

    return mk_set(h_of([_atom(b) for b in base], rank).members)


def _eval_hf(phi, rank, assignment):
    from .folang import evaluate, hf_structure
    from .kernel import enumerate_v

    return evaluate(_atom(phi), hf_structure(enumerate_v(rank)), {v: _atom(x) for v, x in assignment.items()})


def _transfer_report(universe_text, permute, moves, pool):
    from .cli import _universe_trees
    from .folang.pool import FormulaPool
    from .transfer import identity_map, permutation_map, transfer_report, tree_map
    from .universe import mk_universe

    trees = _universe_trees(universe_text)
    U = mk_universe(trees)
    if permute:
        k = permutation_map({parse_set(a): parse_set(b) for a, b in permute.items()}, U)
    elif moves:
        k = tree_map(U, {trees[int(i)]: trees[j] for i, j in moves.items()})
    else:
        k = identity_map(U)
    if isinstance(pool, int):
        pool = FormulaPool(pool, 2).top()
    else:
        pool = _eval(pool)
    return transfer_report(k, U, pool)


def _cofinal(t_text, family, permute):
    from .transfer import cofinal_witness, decode_family, family_code, identity_map, permutation_map
    from .trees import join_tree, relabel
    from .universe import mk_universe

    t = parse_tree(t_text)
    members = {parse_set(x): parse_tree(s) for x, s in family.items()}
    c = family_code(members)
    pi = {parse_set(a): parse_set(b) for a, b in (permute or {}).items()}
    # slices are read back over t's labels, so the universe holds them in that form
    decoded = decode_family(c, t.labels)
    witness = join_tree(decoded)
    pool = [t, *decoded.values(), witness]
    pool += [relabel(x, pi) for x in pool]
    U = mk_universe(pool)
    k = permutation_map(pi, U) if pi else identity_map(U)
    return cofinal_witness(t, c, k, U)


def _suite_verdicts(numbers):
    from .acceptance import run_suites

    return [[r.number, r.passed] for r in run_suites(numbers)]


_SPECIAL = {
    "hx_members": _hx_members,
    "eval_hf": _eval_hf,
    "transfer_report": _transfer_report,
    "cofinal": _cofinal,
    "suite_verdicts": _suite_verdicts,
}


def library_value(expr: Any) -> Any:
    """Evaluate a library expression and render it as JSON data."""
    return render(_eval(expr))


def _eval(expr: Any) -> Any:
    if isinstance(expr, str):
        return _atom(expr)
    if not isinstance(expr, list):
        return expr
    head, *rest = expr
    if head in _SPECIAL:
        return _SPECIAL[head](*rest)
    args = [_eval(a) for a in rest]
    if head == "list":
        return args
    if head == "dict":
        return dict(zip(args[::2], args[1::2]))
    module, _, name = head.rpartition(".")
    return getattr(importlib.import_module(f"setcalc.{module}"), name)(*args)


def render(value: Any) -> Any:
    if isinstance(value, HFSet):
        return print_set(value)
    if isinstance(value, Tree):
        return tree_to_json(value)
    if isinstance(value, Formula):
        return print_formula(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    return value


def project(result: Any, how: str | None) -> Any:
    """The part of a CLI JSON result that the library expression computes."""
    if how is None or result is None:
        return result
    if how == "verdicts":
        return [[r["number"], r["passed"]] for r in result]
    return result[how]


# --- the frozen file ---------------------------------------------------------

_TIMING = re.compile(r"\d+\.\d+s")


def normalize(text: str) -> str:
    """Blank out timings so suite lines compare across runs."""
    return _TIMING.sub("#s", text)


def run_case(case: dict):
    """(exit, stdout, stderr, projected JSON result) of one case."""
    from .cli import run_captured

    files = case.get("files", {})
    code, out, err = run_captured(case["argv"], files)
    _, jout, _ = run_captured(["--json", *case["argv"]], files)
    result = None
    if jout.strip():
        doc = json.loads(jout)
        result = project(doc["result"], case.get("project")) if doc["ok"] else None
    if case.get("stdout_regex"):
        out = normalize(out)
    return code, out, err, result


def make_goldens() -> List[dict]:
    out = []
    for case in CASES:
        code, stdout, stderr, _ = run_case(case)
        record = dict(case)
        record.update({"exit": code, "stdout": stdout, "stderr": stderr})
        if "library" in case:
            record["value"] = library_value(case["library"])
        out.append(record)
    return out


def load_goldens() -> List[dict]:
    return json.loads(DATA.read_text(encoding="utf-8"))


if __name__ == "__main__":
    DATA.parent.mkdir(exist_ok=True)
    DATA.write_text(json.dumps(make_goldens(), indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {DATA}")
