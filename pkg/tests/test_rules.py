import itertools
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from sctlint.errors import (
    HeadNotFunction,
    NonPatternArgument,
    RhsNotBetaNormal,
    UnboundRhsVariable,
    UnsaturatedHead,
    UnusedRuleVariable,
)
from sctlint.parser import RawRule, build_signature, format_term, parse, parse_term
from sctlint.rules import Rule, _walk, beta_normal, orthogonality_lint, unify, validate_rule
from sctlint.terms import App, Symbol, Var, free_vars, is_pattern

from conftest import NAT, corpus_files, corpus_text, load

SIG = build_signature(parse(NAT + """
def g : Nat -> Nat.
def plus : Nat -> Nat -> Nat.
def h : (Nat -> Nat) -> Nat.
def F : Nat -> Type.
"""))


def raw(text):
    (r,) = parse(text).rules
    return r


def check_invariants(rule: Rule, sig):
    assert len(rule.lhs_args) == sig[rule.head].arity
    assert all(is_pattern(a, sig) for a in rule.lhs_args)
    lhs_vars = set().union(*(free_vars(a) for a in rule.lhs_args))
    assert rule.vars == lhs_vars
    assert free_vars(rule.rhs) <= rule.vars
    assert beta_normal(rule.rhs)


class TestValidateRule:
    def test_aux_rule(self, int_zero):
        source, sig, _ = int_zero
        r = validate_rule(raw("[x] aux (S x) --> returnZero x."), sig)
        assert r.head == "aux"
        assert r.lhs_args == (App(Symbol("S"), Var("x")),)
        check_invariants(r, sig)

    def test_type_level_rule(self):
        r = validate_rule(raw("[n] F (S n) --> Nat -> (F n)."), SIG)
        assert r.head == "F"
        check_invariants(r, SIG)

    def test_beta_redex(self):
        with pytest.raises(RhsNotBetaNormal):
            validate_rule(raw("[x] g x --> (y : Nat => y) x."), SIG)

    def test_type_constant_head(self):
        with pytest.raises(HeadNotFunction):
            validate_rule(raw("[] Nat --> Nat."), SIG)

    def test_variable_head(self):
        with pytest.raises(HeadNotFunction):
            validate_rule(raw("[x] x 0 --> 0."), SIG)

    def test_unsaturated(self):
        with pytest.raises(UnsaturatedHead):
            validate_rule(raw("[x] plus x --> x."), SIG)

    def test_oversaturated(self):
        with pytest.raises(UnsaturatedHead):
            validate_rule(raw("[x] g x x --> x."), SIG)

    def test_non_pattern(self):
        with pytest.raises(NonPatternArgument) as e:
            validate_rule(raw("[x] plus x (h x) --> x."), SIG)
        assert e.value.argument == 2

    def test_unbound_rhs(self):
        with pytest.raises(UnboundRhsVariable):
            validate_rule(raw("[] g 0 --> _."), SIG)

    def test_unused_bracket_variable(self):
        with pytest.raises(UnusedRuleVariable):
            validate_rule(raw("[x, y] g x --> x."), SIG)

    def test_lambda_in_rhs(self):
        r = validate_rule(raw("[x] g x --> h (y : Nat => plus x y)."), SIG)
        check_invariants(r, SIG)

    @pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
    def test_corpus_rules_satisfy_invariants(self, path):
        _, sig, rules = load(path.read_text())
        for r in rules:
            check_invariants(r, sig)


class TestBetaNormal:
    def test_no_redex(self):
        assert beta_normal(parse_term("S (plus m n)", {"m", "n"}))

    def test_top_level_redex(self):
        assert not beta_normal(parse_term("(x : Nat => x) 0"))

    def test_lambda_alone(self):
        assert beta_normal(parse_term("x : Nat => x"))

    def test_nested_redex(self):
        assert not beta_normal(parse_term("f (g ((x : Nat => x) 0))"))

    def test_redex_in_annotation(self):
        assert not beta_normal(parse_term("y : ((x : Type => x) Nat) => y"))


class TestUnify:
    def test_overlap_from_int(self):
        s = unify(parse_term("P x", {"x"}), parse_term("P (S y)", {"y"}))
        assert s == {"x": parse_term("S y", {"y"})}

    def test_clash(self):
        assert unify(parse_term("plus 0 n", {"n"}), parse_term("plus (S m) k", {"m", "k"})) is None

    def test_occurs_check(self):
        assert unify(Var("x"), parse_term("S x", {"x"})) is None

    def test_nonlinear(self):
        a = parse_term("f x x", {"x"})
        assert unify(a, parse_term("f 0 (S 0)")) is None
        assert unify(a, parse_term("f 0 y", {"y"})) is not None


def lint_text(text):
    _, sig, rules = load(text)
    return orthogonality_lint(rules, sig)


def overlap_pairs(warnings, rules):
    by_index = {r.index: str(r) for r in rules}
    return {
        frozenset(by_index[i] for i in w.rules)
        for w in warnings if w.kind == "Overlap"
    }


class TestOrthogonalityLint:
    def test_int_pair(self):
        _, sig, rules = load(corpus_text("int.dk"))
        ws = orthogonality_lint(rules, sig)
        assert overlap_pairs(ws, rules) == {frozenset({"S (P x) --> x", "P (S x) --> x"})}
        (overlap,) = [w for w in ws if w.kind == "Overlap"]
        # P x inside S (P x) meets P (S x), and S x inside P (S x) meets S (P x)
        assert set(overlap.sites) == {(0, 1, (2,)), (1, 0, (2,))}

    def test_return_zero_system(self):
        _, sig, rules = load(corpus_text("int_return_zero.dk"))
        pairs = overlap_pairs(orthogonality_lint(rules, sig), rules)
        assert pairs == {
            frozenset({"S (P x) --> x", "P (S x) --> x"}),
            frozenset({"S (P x) --> x", "aux (S x) --> returnZero x"}),
            frozenset({"P (S x) --> x", "aux (P x) --> returnZero x"}),
        }

    def test_peano_clean(self):
        assert lint_text(corpus_text("peano.dk")) == []

    def test_non_left_linear(self):
        ws = lint_text(NAT + "def f : Nat -> Nat -> Nat.\n[x] f x x --> x.")
        assert [w.kind for w in ws] == ["NonLeftLinear"]

    def test_root_overlap(self):
        ws = lint_text(NAT + "def f : Nat -> Nat.\n[x] f x --> x.\n[] f 0 --> 0.")
        assert [w.kind for w in ws] == ["Overlap"]
        assert ws[0].rules == (0, 1)

    def test_self_overlap_at_proper_position(self):
        ws = lint_text(NAT + "def S' : Nat -> Nat.\n[x] S' (S' x) --> x.")
        overlaps = [w for w in ws if w.kind == "Overlap"]
        assert len(overlaps) == 1 and overlaps[0].rules == (0, 0)
        assert overlaps[0].sites == ((0, 0, (2,)),)

    def test_permutation_symmetry(self):
        source = parse(corpus_text("int_return_zero.dk"))
        sig = build_signature(source)
        expected = None
        for perm in itertools.permutations(source.rules):
            rules = [validate_rule(r, sig, i) for i, r in enumerate(perm)]
            pairs = overlap_pairs(orthogonality_lint(rules, sig), rules)
            if expected is None:
                expected = pairs
            assert pairs == expected

    def test_warnings_in_source_order(self):
        ws = lint_text(corpus_text("int_return_zero.dk"))
        keys = [w.rules for w in ws]
        assert keys == sorted(keys)


PATTERNS = st.recursive(
    st.sampled_from(["x", "y"]).map(Var) | st.just(Symbol("0")),
    lambda sub: sub.map(lambda p: App(Symbol("S"), p)),
    max_leaves=4,
)


@given(PATTERNS, PATTERNS)
def test_unifier_unifies(a, b):
    s = unify(a, b)
    if s is None:
        return

    def resolve(t):
        t = _walk(t, s)
        if isinstance(t, App):
            return App(resolve(t.head), resolve(t.arg))
        return t

    assert resolve(a) == resolve(b)


@given(st.lists(st.tuples(PATTERNS, PATTERNS), min_size=1, max_size=3), st.randoms())
def test_lint_order_independent(lhss, rnd):
    text = NAT + "def f : Nat -> Nat -> Nat.\n"
    raws = []
    for a, b in lhss:
        lhs = App(App(Symbol("f"), a), b)
        raws.append(RawRule(tuple(sorted(free_vars(lhs))), lhs, Symbol("0")))
    sig = build_signature(parse(text))
    rules = [validate_rule(r, sig, i) for i, r in enumerate(raws)]
    shuffled = list(raws)
    rnd.shuffle(shuffled)
    rules2 = [validate_rule(r, sig, i) for i, r in enumerate(shuffled)]

    def summary(rs):
        by_index = {r.index: format_term(r.lhs) for r in rs}
        return Counter(
            (w.kind, frozenset(Counter(by_index[i] for i in w.rules).items()))
            for w in orthogonality_lint(rs, sig)
        )

    assert summary(rules) == summary(rules2)
