"""The ``setcalc`` command line.

Every input may be given inline (set, tree or formula text) or through a
``--NAME-file`` flag; a positional argument that names an existing file is
read from that file.  ``--json`` wraps the result in a fixed envelope.
Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import sys
import tempfile
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from . import flatcode
from .bisim import eq_star, in_star
from .errors import NotOntoTransitiveClosure, RankBoundExceeded, SelftestFailed, SetCalcError
from .folang import (
    BUILTIN_NAMES,
    builtin_formula,
    evaluate,
    hf_structure,
    is_delta0,
    parse_formula,
    print_formula,
    translate,
    unbound,
)
from .folang.pool import FormulaPool
from .hx import MAX_H_RANK, h_of, theta
from .kernel import HFSet, enumerate_v, mk_set, nat, parse_set, print_set, trcl
from .transfer import (
    cofinal_witness,
    family_code,
    identity_map,
    permutation_map,
    transfer_report,
    tree_map,
)
from .trees import (
    Tree,
    canonical_tree,
    join_tree,
    parse_tree,
    print_tree,
    relabel,
    singleton_tree,
    tcoll,
    trcl_tree,
    tree_to_json,
)
from .universe import mk_universe

MAX_EVAL_RANK = 4
UNIVERSE_SEPARATOR = "---"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: usage error: {message}\n")


# --- reading inputs ----------------------------------------------------------


def _add_input(p: argparse.ArgumentParser, name: str, what: str, optional: bool = False) -> None:
    p.add_argument(name, nargs="?", help=f"{what}, inline or a file path")
    p.add_argument(f"--{name}-file", dest=f"{name}_file", metavar="PATH", help=f"read {name} from a file")
    p.set_defaults(**{f"_{name}_optional": optional})


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _text(args, name: str) -> Optional[str]:
    path = getattr(args, f"{name}_file")
    if path is not None:
        return _read(path)
    value = getattr(args, name)
    if value is None:
        if getattr(args, f"_{name}_optional", False):
            return None
        args._parser.error(f"missing {name}: give it inline or with --{name}-file")
    if os.path.isfile(value):
        return _read(value)
    return value


def _set(args, name: str) -> HFSet:
    return parse_set(_text(args, name).strip())


def _tree(args, name: str) -> Tree:
    return parse_tree(_text(args, name))


def _tree_arg(value: str) -> Tree:
    return parse_tree(_read(value) if os.path.isfile(value) else value)


def _set_arg(value: str) -> HFSet:
    return parse_set((_read(value) if os.path.isfile(value) else value).strip())


def _pairs(items: Sequence[str], flag: str, args) -> List[Tuple[str, str]]:
    out = []
    for item in items or ():
        if "=" not in item:
            args._parser.error(f"{flag} expects A=B, got {item!r}")
        a, b = item.split("=", 1)
        out.append((a.strip(), b.strip()))
    return out


def _permutation(args) -> Dict[HFSet, HFSet]:
    pi = {parse_set(a): parse_set(b) for a, b in _pairs(args.permute, "--permute", args)}
    if set(pi) != set(pi.values()):
        args._parser.error("--permute must describe a permutation of its labels")
    return pi


def _universe_trees(text: str) -> List[Tree]:
    chunks, current = [], []
    for line in text.splitlines():
        if line.strip() == UNIVERSE_SEPARATOR:
            chunks.append("\n".join(current))
            current = []
        else:
            current.append(line)
    chunks.append("\n".join(current))
    return [parse_tree(c) for c in chunks if c.strip()]


# --- commands ----------------------------------------------------------------

# a handler returns (JSON result, text output)
Handler = Callable[[argparse.Namespace], Tuple[object, str]]


def _set_out(a: HFSet) -> Tuple[object, str]:
    return print_set(a), print_set(a) + "\n"


def _tree_out(t: Tree) -> Tuple[object, str]:
    return tree_to_json(t), print_tree(t)


def _bool_out(b: bool) -> Tuple[object, str]:
    return b, ("true" if b else "false") + "\n"


def cmd_pair(args):
    return _set_out(flatcode.flat_pair(_set(args, "a"), _set(args, "b")))


def cmd_tuple(args):
    items = [_set_arg(x) for x in args.items]
    if args.items_file:
        items += [parse_set(line) for line in _read(args.items_file).splitlines() if line.strip()]
    return _set_out(flatcode.flat_tuple(items))


def cmd_lh(args):
    n = flatcode.lh(_set(args, "sigma"))
    return n, f"{n}\n"


def cmd_concat(args):
    return _set_out(flatcode.concat(_set(args, "sigma"), _set(args, "tau")))


def cmd_prod(args):
    return _set_out(flatcode.flat_prod(_set(args, "a"), _set(args, "b")))


def cmd_dom(args):
    return _set_out(flatcode.dom(_set(args, "a")))


def cmd_ran(args):
    return _set_out(flatcode.ran(_set(args, "a")))


def cmd_slice(args):
    return _set_out(flatcode.slice_(_set(args, "a"), _set(args, "index")))


def cmd_dunion(args):
    return _set_out(flatcode.disjoint_union(_set(args, "a"), _set(args, "b")))


def cmd_collapse(args):
    return _set_out(tcoll(_tree(args, "tree")))


def encode_set(a: HFSet, labels: Optional[int] = None) -> Tree:
    """Canonical tree of ``a`` with label i+1 naming member i mod |trcl a| of trcl(a)."""
    members = list(trcl(a))
    n = len(members) if labels is None else labels
    if n and not members:
        raise NotOntoTransitiveClosure("the empty set has no members to label")
    f = {nat(i + 1): members[i % len(members)] for i in range(n)}
    return canonical_tree(a, f)


def cmd_encode(args):
    return _tree_out(encode_set(_set(args, "set"), args.labels))


def cmd_trcltree(args):
    return _tree_out(trcl_tree(_tree(args, "tree")))


def cmd_singleton(args):
    return _tree_out(singleton_tree(_tree(args, "tree")))


def cmd_join(args):
    branches = {}
    for label, tree in args.branch or ():
        branches[parse_set(label)] = _tree_arg(tree)
    return _tree_out(join_tree(branches))


def cmd_bisim(args):
    same = eq_star(_tree(args, "s"), _tree(args, "t"))
    return same, ("equal" if same else "different") + "\n"


def cmd_member(args):
    return _bool_out(in_star(_tree(args, "s"), _tree(args, "t")))


def cmd_theta(args):
    n = theta(_set(args, "set"))
    return n, f"{n}\n"


def cmd_hx(args):
    base = [_set_arg(x) for x in args.base]
    if args.rank > MAX_H_RANK:
        raise RankBoundExceeded(f"--rank is at most {MAX_H_RANK}")
    return _set_out(mk_set(h_of(base, args.rank).members))


def _formula(args):
    return parse_formula(_text(args, "formula"))


def cmd_translate(args):
    phi = _formula(args)
    if args.unbound:
        phi = unbound(phi)
    t = translate(phi, literal=args.literal)
    text = print_formula(t)
    return text, text + "\n"


def cmd_eval(args):
    if args.rank > MAX_EVAL_RANK:
        raise RankBoundExceeded(f"--rank is at most {MAX_EVAL_RANK}")
    phi = _formula(args)
    assignment = {v: parse_set(x) for v, x in _pairs(args.assign, "--assign", args)}
    return _bool_out(evaluate(phi, hf_structure(enumerate_v(args.rank)), assignment))


def cmd_delta0(args):
    if args.builtin is not None:
        phi = builtin_formula(args.builtin)
    elif args.formula is None and args.formula_file is None:
        args._parser.error("give a formula or --builtin NAME")
    else:
        phi = _formula(args)
    return _bool_out(is_delta0(phi))


def _map_for(args, U, trees: Sequence[Tree]):
    pi = _permutation(args)
    moves = _pairs(args.map, "--map", args)
    if pi and moves:
        args._parser.error("--permute and --map cannot be combined")
    if pi:
        return permutation_map(pi, U)
    if moves:
        try:
            mapping = {trees[int(i)]: trees[int(j)] for i, j in moves}
        except (ValueError, IndexError):
            args._parser.error("--map expects I=J with tree positions in the universe file")
        return tree_map(U, mapping)
    return identity_map(U)


def cmd_transfer_check(args):
    trees = _universe_trees(_text(args, "universe"))
    U = mk_universe(trees)
    k = _map_for(args, U, trees)
    if args.formula_list:
        pool = [parse_formula(f) for f in args.formula_list]
    else:
        pool = FormulaPool(args.pool_size, args.pool_depth).top()
    report = transfer_report(k, U, pool)
    return report.to_json(), report.to_text()


def _closure(trees, pi: Mapping[HFSet, HFSet]) -> List[Tree]:
    out = list(dict.fromkeys(trees))
    frontier = list(out)
    while frontier and pi:
        nxt = []
        for t in frontier:
            image = relabel(t, pi)
            if image not in out:
                out.append(image)
                nxt.append(image)
        frontier = nxt
    return out


def cmd_cofinal_witness(args):
    from .transfer import decode_family

    t = _tree(args, "tree")
    pi = _permutation(args)
    if args.code is not None:
        c = _set_arg(args.code)
    else:
        c = family_code({parse_set(x): _tree_arg(s) for x, s in args.slice or ()})
    if args.universe_file:
        trees = _universe_trees(_read(args.universe_file))
    else:
        family = decode_family(c, t.labels)
        trees = _closure([t, *family.values(), join_tree(family)] if family else [t], pi)
    U = mk_universe(trees)
    k = permutation_map(pi, U) if pi else identity_map(U)
    witness = cofinal_witness(t, c, k, U)
    holds = in_star(t, k(witness))
    result = {"witness": tree_to_json(witness), "image": tree_to_json(k(witness)), "holds": holds}
    text = "witness:\n" + print_tree(witness) + f"t in* k(witness): {'true' if holds else 'false'}\n"
    return result, text


def cmd_selftest(args):
    from .acceptance import run_suites

    results = run_suites(args.only or None)
    text = "".join(r.line() + "\n" for r in results)
    failed = [r.number for r in results if not r.passed]
    if failed:
        raise SelftestFailed(f"suites {failed} failed", result=[r.to_json() for r in results], text=text)
    return [r.to_json() for r in results], text


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="setcalc", description="Hereditarily finite sets, flat codes and coding trees.")
    parser.add_argument("--json", action="store_true", help="print a JSON envelope")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name: str, handler: Handler, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print a JSON envelope")
        p.set_defaults(handler=handler, _parser=p)
        return p

    p = add("pair", cmd_pair, "flat pair of two sets")
    _add_input(p, "a", "first set")
    _add_input(p, "b", "second set")
    p = add("tuple", cmd_tuple, "flat tuple of the given sets")
    p.add_argument("items", nargs="*", help="coordinates")
    p.add_argument("--items-file", metavar="PATH", help="one coordinate per line, after the inline ones")
    p = add("lh", cmd_lh, "length of a flat tuple")
    _add_input(p, "sigma", "flat tuple")
    p = add("concat", cmd_concat, "concatenate two flat tuples")
    _add_input(p, "sigma", "first tuple")
    _add_input(p, "tau", "second tuple")
    p = add("prod", cmd_prod, "flat product of two sets")
    _add_input(p, "a", "first set")
    _add_input(p, "b", "second set")
    for name, handler in (("dom", cmd_dom), ("ran", cmd_ran)):
        p = add(name, handler, f"{'domain' if name == 'dom' else 'range'} of the flat pairs in a set")
        _add_input(p, "a", "set")
    p = add("slice", cmd_slice, "the slice of a set at an index")
    _add_input(p, "a", "set")
    _add_input(p, "index", "index")
    p = add("dunion", cmd_dunion, "disjoint union of two sets")
    _add_input(p, "a", "first set")
    _add_input(p, "b", "second set")
    p = add("collapse", cmd_collapse, "transitive collapse of a tree")
    _add_input(p, "tree", "tree")
    p = add("encode", cmd_encode, "canonical tree of a set")
    _add_input(p, "set", "set")
    p.add_argument("--labels", type=int, metavar="N", help="number of labels (default |trcl set|)")
    p = add("trcltree", cmd_trcltree, "tree collapsing to the transitive closure")
    _add_input(p, "tree", "tree")
    p = add("singleton", cmd_singleton, "tree collapsing to the singleton")
    _add_input(p, "tree", "tree")
    p = add("join", cmd_join, "join trees under labelled root edges")
    p.add_argument("--branch", nargs=2, action="append", metavar=("LABEL", "TREE"), required=True)
    p = add("bisim", cmd_bisim, "decide =* between two trees")
    _add_input(p, "s", "first tree")
    _add_input(p, "t", "second tree")
    p = add("member", cmd_member, "decide in* between two trees")
    _add_input(p, "s", "first tree")
    _add_input(p, "t", "second tree")
    p = add("theta", cmd_theta, "largest n with a surjection from the set onto n")
    _add_input(p, "set", "set")
    p = add("hx", cmd_hx, "H(X) up to a rank bound")
    p.add_argument("base", nargs="+", help="members of X")
    p.add_argument("--rank", type=int, required=True, help=f"rank bound, at most {MAX_H_RANK}")
    p = add("translate", cmd_translate, "translate a formula to the code language")
    _add_input(p, "formula", "formula")
    p.add_argument("--literal", action="store_true", help="guard both quantifiers with ->")
    p.add_argument("--unbound", action="store_true", help="rewrite bounded quantifiers as guarded ones first")
    p = add("eval", cmd_eval, "evaluate a formula in V_R")
    _add_input(p, "formula", "formula")
    p.add_argument("--rank", type=int, default=3, help=f"R, at most {MAX_EVAL_RANK} (default 3)")
    p.add_argument("--assign", action="append", metavar="VAR=SET", help="value of a free variable")
    p = add("delta0", cmd_delta0, "decide whether a formula is bounded")
    _add_input(p, "formula", "formula", optional=True)
    p.add_argument("--builtin", choices=BUILTIN_NAMES, help="check a library formula instead")
    p = add("transfer-check", cmd_transfer_check, "congruence and elementarity of a map on a code universe")
    _add_input(p, "universe", f"trees separated by {UNIVERSE_SEPARATOR} lines")
    p.add_argument("--permute", action="append", metavar="A=B", help="label permutation defining the map")
    p.add_argument("--map", action="append", metavar="I=J", help="send tree I to tree J (file positions)")
    p.add_argument("--formula", dest="formula_list", action="append", metavar="FORMULA", help="pool formula")
    p.add_argument("--pool-size", type=int, default=5)
    p.add_argument("--pool-depth", type=int, default=2)
    p = add("cofinal-witness", cmd_cofinal_witness, "slice-join witness for a tree and an encoded family")
    _add_input(p, "tree", "tree")
    p.add_argument("--code", metavar="SET", help="the family code c, inline or a file")
    p.add_argument("--slice", nargs=2, action="append", metavar=("INDEX", "TREE"), help="one family member")
    p.add_argument("--permute", action="append", metavar="A=B", help="label permutation defining k")
    p.add_argument("--universe-file", metavar="PATH", help="code universe (default: closure of the inputs)")
    p = add("selftest", cmd_selftest, "run the acceptance suites")
    p.add_argument("--only", type=int, action="append", metavar="N", help="run suite N only")
    return parser


SUBCOMMANDS = (
    "pair", "tuple", "lh", "concat", "prod", "dom", "ran", "slice", "dunion", "collapse", "encode",
    "trcltree", "singleton", "join", "bisim", "member", "theta", "hx", "translate", "eval", "delta0",
    "transfer-check", "cofinal-witness", "selftest",
)


def _envelope(command: str, ok: bool, result, error) -> str:
    return json.dumps({"command": command, "ok": ok, "result": result, "error": error}, ensure_ascii=False)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, text = args.handler(args)
    except SetCalcError as exc:
        name = type(exc).__name__
        if args.json:
            print(_envelope(args.command, False, getattr(exc, "result", None), {"name": name, "message": str(exc)}))
        else:
            sys.stdout.write(getattr(exc, "text", ""))
            print(f"error: {name}: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(_envelope(args.command, True, result, None))
    else:
        sys.stdout.write(text)
    return 0


def run_captured(argv: Sequence[str], files: Optional[Mapping[str, str]] = None) -> Tuple[int, str, str]:
    """Run the CLI in a scratch directory holding ``files``; return (exit, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with tempfile.TemporaryDirectory() as tmp:
        for name, content in (files or {}).items():
            with open(os.path.join(tmp, name), "w", encoding="utf-8") as fh:
                fh.write(content)
        cwd = os.getcwd()
        os.chdir(tmp)
        try:
            with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
                try:
                    code = main(list(argv))
                except SystemExit as exc:
                    code = exc.code if isinstance(exc.code, int) else 2
        finally:
            os.chdir(cwd)
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    sys.exit(main())
