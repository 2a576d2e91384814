import dataclasses

import pytest
from hypothesis import given, strategies as st

from sctlint.callgraph import extract_calls
from sctlint.cc import ClosureContext, cc_member, check_all, check_rule
from sctlint.parser import parse_term
from sctlint.terms import Symbol, Var, apply

from conftest import NAT, corpus_files, corpus_text, load


def clauses(result):
    return [(p, c) for p, c in result.trace]


class TestExamples:
    def test_variable(self, peano):
        _, sig, rules = peano
        r = check_rule(rules[0], sig)  # plus 0 n --> n
        assert r.ok and clauses(r) == [((), "var")]

    def test_cons_over_call(self, peano):
        _, sig, rules = peano
        r = check_rule(rules[1], sig)  # plus (S m) n --> S (plus m n)
        assert r.ok
        assert clauses(r) == [
            ((), "cons"),
            ((2,), "call"),
            ((2, 1, 2), "var"),
            ((2, 2), "var"),
        ]

    def test_call_to_defined_constructor(self, int_zero):
        _, sig, rules = int_zero
        (rule,) = [r for r in rules if r.head == "returnZero"]
        assert sig.is_constructor("aux")
        assert check_rule(rule, sig).trace == (((), "call"), ((2,), "var"))

    def test_int_system_passes(self, int_zero):
        _, sig, rules = int_zero
        assert check_all(rules, sig).ok

    def test_type_level(self):
        _, sig, rules = load(corpus_text("type_level.dk"))
        assert check_rule(rules[0], sig).trace == (((), "sym"),)
        r = check_rule(rules[1], sig)  # F (S n) --> Nat -> F n
        assert [c for _, c in r.trace] == ["prod", "sym", "call", "var"]
        assert r.call_positions() == {(1,), (2,)}

    def test_lambda_binds(self):
        _, sig, rules = load(corpus_text("map.dk"))
        r = check_rule(rules[2], sig)  # incr_all l --> map (x : Nat => S x) l
        assert r.ok
        assert ((1, 2), "lam") in r.trace
        assert ((1, 2, 2, 2), "var") in r.trace

    def test_higher_order_argument(self):
        _, sig, rules = load(corpus_text("map.dk"))
        r = check_rule(rules[1], sig)  # cons (f x) (map f l)
        assert r.ok
        assert ((1, 2), "app") in r.trace

    def test_undeclared_symbol_fails(self, peano):
        _, sig, rules = peano
        rule = dataclasses.replace(rules[0], rhs=apply(Symbol("h"), Var("n")))
        r = check_rule(rule, sig)
        assert not r.ok
        assert r.failure.position == ()
        assert "h" in r.failure.reason

    def test_foreign_variable_fails(self, peano):
        _, sig, rules = peano
        rule = dataclasses.replace(rules[0], rhs=Var("z"))
        r = check_rule(rule, sig)
        assert not r.ok and r.failure.term == "z"

    def test_partial_application_fails(self):
        _, sig, rules = load(
            NAT + "def k : Nat -> Nat -> Nat.\ndef g : (Nat -> Nat) -> Nat.\n[x] g x --> g (k 0)."
        )
        r = check_rule(rules[0], sig)
        assert not r.ok
        assert r.failure.position == (2,)

    def test_failure_reports_first_bad_position(self, peano):
        _, sig, rules = peano
        rhs = parse_term("S (plus z n)", {"n", "z"})
        r = check_rule(dataclasses.replace(rules[1], rhs=rhs), sig)
        assert r.failure.position == (2, 1, 2)

    def test_sort(self):
        _, sig, rules = load("def T : Type.\n[] T --> Type.")
        assert check_rule(rules[0], sig).trace == (((), "sort"),)

    def test_report(self, peano):
        _, sig, rules = peano
        report = check_all(rules, sig)
        assert report.ok and not report.failures()
        js = report.checks[1].to_json()
        assert js["status"] == "pass" and js["rule"] == 1
        assert js["trace_or_failure"][0] == {"position": [], "clause": "cons"}


class TestLhsArguments:
    @pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
    def test_lhs_arguments_derivable(self, path):
        _, sig, rules = load(path.read_text())
        for rule in rules:
            ctx = ClosureContext.for_rule(rule)
            for a in rule.lhs_args:
                assert cc_member(a, ctx, sig).ok, (str(rule), a)


class TestMonotonicity:
    @given(st.sets(st.sampled_from(["a", "b", "c", "m", "n"])), st.sampled_from(["a", "b", "c", "m", "n"]))
    def test_bigger_base(self, base, extra):
        _, sig, rules = load(corpus_text("peano.dk"))
        rhs = parse_term("plus (S a) (mult b c)", {"a", "b", "c"})
        rule = dataclasses.replace(rules[3], rhs=rhs)
        small = cc_member(rhs, ClosureContext(rule, frozenset(base)), sig)
        big = cc_member(rhs, ClosureContext(rule, frozenset(base | {extra})), sig)
        if small.ok:
            assert big.ok


class TestCallConsistency:
    @pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
    def test_call_positions_match_extraction(self, path):
        _, sig, rules = load(path.read_text())
        for rule in rules:
            r = check_rule(rule, sig)
            if r.ok:
                assert r.call_positions() == {c.position for c in extract_calls(rule, sig)}
