import json
from fractions import Fraction
from pathlib import Path
from random import Random

import pytest

from suppsets.atoms import (
    FiniteMap,
    Support,
    SymmetryId,
    apply,
)
from suppsets.automata import (
    Config,
    ConfigAutomaton,
    ExtConfigs,
    Guard,
    INPUT,
    Literal,
    Nfa,
    PfSubsets,
    Reg,
    RegisterAutomaton,
    TRUE_GUARD,
    UnresolvedRegister,
    act_config,
    automaton_from_json,
    automaton_to_json,
    default_signature,
    determinize_generic,
    eval_guard,
    initial_config,
    make_transition,
    reachable_orbits,
    run,
    step,
    step_full,
    validate,
)
from suppsets.checks import (
    ascent_automaton,
    first_repeat_automaton,
    nfa_simulate,
    pool_atoms,
    random_global,
    random_nfa,
)
from suppsets.freenom import RestrictedMap
from suppsets.supported import SuppSet

EQ = SymmetryId.EQUALITY
ORD = SymmetryId.TOTAL_ORDER
DATA = Path(__file__).resolve().parent.parent / "data"


def config(ra, loc, valuation):
    return Config(loc, RestrictedMap(ra.sym, FiniteMap.of(valuation)))


class TestValidate:
    def test_first_repeat_is_coherent(self):
        assert validate(first_repeat_automaton()).ok

    def test_ascent_is_coherent(self):
        assert validate(ascent_automaton()).ok

    def test_initialized_initial_location(self):
        ra = first_repeat_automaton()
        bad = RegisterAutomaton(
            EQ,
            SuppSet.of([("q0", Support.of([0])), ("q1", Support.of([0])), ("qa", Support())]),
            "q0",
            frozenset(["qa"]),
            ra.transitions,
        )
        report = validate(bad)
        assert not report.ok
        assert any("uninitialized" in e for e in report.errors)

    def test_non_injective_assignment(self):
        locs = SuppSet.of([("q0", Support()), ("q1", Support.of([0, 1]))])
        t = make_transition("q0", TRUE_GUARD, "q1", {0: INPUT, 1: INPUT})
        report = validate(RegisterAutomaton(EQ, locs, "q0", frozenset(), (t,)))
        assert any("not injective" in e for e in report.errors)

    def test_guard_register_outside_source(self):
        locs = SuppSet.of([("q0", Support()), ("q1", Support())])
        g = Guard((Literal(True, "eq", (INPUT, Reg(3))),))
        t = make_transition("q0", g, "q1", {})
        report = validate(RegisterAutomaton(EQ, locs, "q0", frozenset(), (t,)))
        assert any("outside the source support" in e for e in report.errors)

    def test_unknown_relation(self):
        locs = SuppSet.of([("q0", Support())])
        g = Guard((Literal(True, "between", (INPUT, INPUT)),))
        t = make_transition("q0", g, "q0", {})
        report = validate(RegisterAutomaton(EQ, locs, "q0", frozenset(), (t,)))
        assert any("unknown relation" in e for e in report.errors)

    def test_assignment_must_cover_target(self):
        locs = SuppSet.of([("q0", Support()), ("q1", Support.of([0]))])
        t = make_transition("q0", TRUE_GUARD, "q1", {})
        report = validate(RegisterAutomaton(EQ, locs, "q0", frozenset(), (t,)))
        assert any("target registers" in e for e in report.errors)


class TestEvalGuard:
    def test_eq_literal(self):
        sig = default_signature(EQ)
        val = RestrictedMap(EQ, FiniteMap.of({0: 5}))
        g = Guard((Literal(True, "eq", (INPUT, Reg(0))),))
        assert eval_guard(sig, g, val, 5)
        assert not eval_guard(sig, g, val, 3)

    def test_negation(self):
        sig = default_signature(EQ)
        val = RestrictedMap(EQ, FiniteMap.of({0: 5}))
        g = Guard((Literal(False, "eq", (INPUT, Reg(0))),))
        assert not eval_guard(sig, g, val, 5)

    def test_order_literal(self):
        sig = default_signature(ORD)
        val = RestrictedMap(ORD, FiniteMap.of({Fraction(0): Fraction(1, 2)}))
        g = Guard((Literal(True, "lt", (Reg(Fraction(0)), INPUT)),))
        assert eval_guard(sig, g, val, Fraction(2))
        assert not eval_guard(sig, g, val, Fraction(1, 4))

    def test_unresolved_register(self):
        sig = default_signature(EQ)
        val = RestrictedMap(EQ, FiniteMap.of({}))
        g = Guard((Literal(True, "eq", (INPUT, Reg(0))),))
        with pytest.raises(UnresolvedRegister):
            eval_guard(sig, g, val, 1)


class TestStep:
    def setup_method(self):
        self.ra = first_repeat_automaton()

    def test_initial_step_stores_input(self):
        succ = step(self.ra, initial_config(self.ra), 5)
        assert succ == (config(self.ra, "q1", {0: 5}),)

    def test_matching_input_accepts(self):
        succ = step(self.ra, config(self.ra, "q1", {0: 5}), 5)
        assert succ == (config(self.ra, "qa", {}),)

    def test_mismatching_input_loops(self):
        succ = step(self.ra, config(self.ra, "q1", {0: 5}), 3)
        assert succ == (config(self.ra, "q1", {0: 5}),)

    def test_inadmissible_successor_dropped_with_flag(self):
        # a two-register location forced to store the same value twice
        locs = SuppSet.of([("q0", Support()), ("p", Support.of([0])), ("d", Support.of([0, 1]))])
        ts = (
            make_transition("q0", TRUE_GUARD, "p", {0: INPUT}),
            make_transition("p", TRUE_GUARD, "d", {0: Reg(0), 1: INPUT}),
        )
        ra = RegisterAutomaton(EQ, locs, "q0", frozenset(["d"]), ts)
        assert validate(ra).ok
        c = config(ra, "p", {0: 7})
        kept, dropped = step_full(ra, c, 7)
        assert kept == ()
        assert len(dropped) == 1
        # the renaming symmetry keeps the duplicate-storing successor
        ra2 = RegisterAutomaton(SymmetryId.RENAMING, locs, "q0", frozenset(["d"]), ts)
        c2 = config(ra2, "p", {0: 7})
        kept2, dropped2 = step_full(ra2, c2, 7)
        assert len(kept2) == 1 and not dropped2


class TestRun:
    def test_first_repeat_examples(self):
        ra = first_repeat_automaton()
        assert run(ra, [5, 3, 5])
        assert not run(ra, [5, 3, 4])
        assert not run(ra, [])

    def test_matches_predicate_exhaustively(self):
        ra = first_repeat_automaton()
        pool = tuple(range(3))
        words = [[]]
        for _ in range(3):
            words = [w + [a] for w in words for a in pool] + words
        for w in words:
            expected = any(a == w[0] for a in w[1:]) if w else False
            assert run(ra, w) == expected, w

    def test_ascent_automaton(self):
        ra = ascent_automaton()
        assert run(ra, [Fraction(1), Fraction(1, 2), Fraction(3, 2)])
        assert not run(ra, [Fraction(1), Fraction(1)])

    def test_validated_runs_never_hit_unresolved_registers(self):
        rng = Random(5)
        for ra in (first_repeat_automaton(), ascent_automaton()):
            atoms = tuple(pool_atoms(ra.sym, 4))
            for _ in range(50):
                word = [rng.choice(atoms) for _ in range(rng.randint(0, 5))]
                run(ra, word)  # must not raise


class TestEquivariance:
    @pytest.mark.parametrize("seed", range(10))
    def test_step_commutes_with_the_action_equality(self, seed):
        rng = Random(seed)
        ra = first_repeat_automaton()
        g = random_global(rng, EQ, pool_atoms(EQ, 6))
        for c in (initial_config(ra), config(ra, "q1", {0: rng.randrange(6)})):
            a = rng.randrange(6)
            lhs = step(ra, act_config(g, c), apply(g, a))
            rhs = tuple(sorted((act_config(g, s) for s in step(ra, c, a)),
                               key=lambda s: (str(s.loc), s.valuation.images.entries)))
            assert lhs == rhs

    @pytest.mark.parametrize("seed", range(10))
    def test_step_commutes_with_the_action_order(self, seed):
        rng = Random(seed)
        ra = ascent_automaton()
        pool = pool_atoms(ORD, 5)
        g = random_global(rng, ORD, pool)
        atoms = tuple(pool)
        for c in (initial_config(ra), config(ra, "q1", {Fraction(0): rng.choice(atoms)})):
            a = rng.choice(atoms)
            lhs = step(ra, act_config(g, c), apply(g, a))
            rhs = tuple(sorted((act_config(g, s) for s in step(ra, c, a)),
                               key=lambda s: (str(s.loc), s.valuation.images.entries)))
            assert lhs == rhs

    @pytest.mark.parametrize("seed", range(10))
    def test_run_is_orbit_invariant(self, seed):
        rng = Random(seed)
        ra = first_repeat_automaton()
        g = random_global(rng, EQ, pool_atoms(EQ, 6))
        word = [rng.randrange(6) for _ in range(rng.randint(0, 5))]
        assert run(ra, word) == run(ra, [apply(g, a) for a in word])


class TestDeterminizeClassical:
    def test_worked_nfa(self):
        nfa = Nfa(
            states=(1, 2),
            alphabet=("a", "b"),
            initial=1,
            final=frozenset([2]),
            delta={(1, "a"): frozenset([1, 2]), (2, "b"): frozenset([2])},
        )
        det = determinize_generic(PfSubsets, nfa)
        assert det.accepts("ab")
        assert not det.accepts("b")

    def test_singleton_observation_matches_coalgebra(self):
        nfa = random_nfa(Random(3))
        det = determinize_generic(PfSubsets, nfa)
        for q in nfa.states:
            assert det.observe(frozenset([q])) == nfa.coalg(q)

    @pytest.mark.parametrize("seed", range(15))
    def test_language_matches_simulation(self, seed):
        rng = Random(seed)
        nfa = random_nfa(rng)
        det = determinize_generic(PfSubsets, nfa)
        for _ in range(25):
            word = [rng.choice(nfa.alphabet) for _ in range(rng.randint(0, 6))]
            assert det.accepts(word) == nfa_simulate(nfa, word)

    def test_unsupported_monad(self):
        with pytest.raises(ValueError):
            determinize_generic(object, random_nfa(Random(0)))

    def test_ext_instance_is_step(self):
        ra = first_repeat_automaton()
        conf = determinize_generic(ExtConfigs, ra)
        assert isinstance(conf, ConfigAutomaton)
        assert conf.accepts([5, 3, 5]) == run(ra, [5, 3, 5])
        assert conf.successor((initial_config(ra),), 5) == step(ra, initial_config(ra), 5)


class TestReachableOrbits:
    def test_first_repeat_summary(self):
        ra = first_repeat_automaton()
        summary = reachable_orbits(ra, pool_atoms(EQ, 3), 3)
        assert summary.as_dict() == {"q0": 1, "q1": 1, "qa": 1}

    def test_depth_zero(self):
        ra = first_repeat_automaton()
        summary = reachable_orbits(ra, pool_atoms(EQ, 3), 0)
        assert summary.as_dict() == {"q0": 1, "q1": 0, "qa": 0}

    def test_stable_under_pool_growth(self):
        for ra, sym in ((first_repeat_automaton(), EQ), (ascent_automaton(), ORD)):
            small = reachable_orbits(ra, pool_atoms(sym, 3), 3)
            big = reachable_orbits(ra, pool_atoms(sym, 4), 3)
            assert small.as_dict() == big.as_dict()

    def test_renaming_rejected(self):
        locs = SuppSet.of([("q0", Support())])
        ra = RegisterAutomaton(SymmetryId.RENAMING, locs, "q0", frozenset(), ())
        with pytest.raises(ValueError):
            reachable_orbits(ra, pool_atoms(SymmetryId.RENAMING, 2), 1)


class TestJson:
    def test_shipped_files_round_trip(self):
        for name in ("first_repeat.json", "ascent_after_first.json"):
            doc = json.loads((DATA / name).read_text())
            ra = automaton_from_json(doc)
            assert validate(ra).ok
            again = automaton_from_json(automaton_to_json(ra))
            assert automaton_to_json(again) == automaton_to_json(ra)

    def test_shipped_equals_builtin(self):
        doc = json.loads((DATA / "first_repeat.json").read_text())
        ra = automaton_from_json(doc)
        built = first_repeat_automaton()
        assert automaton_to_json(ra) == automaton_to_json(built)
