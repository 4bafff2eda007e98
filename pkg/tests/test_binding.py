from random import Random

import pytest
from hypothesis import given, strategies as st

from suppsets.atoms import Support, SymmetryId, apply, transposition
from suppsets.binding import (
    AbsClass,
    App,
    DbApp,
    DbLam,
    Idx,
    Lam,
    TermSyntaxError,
    Var,
    act_abs,
    act_term,
    alpha_eq,
    alpha_eq_terms,
    b_support,
    db_free_indices,
    debruijn_from_json,
    debruijn_to_json,
    free_atoms,
    from_debruijn,
    maxidx,
    named_from_json,
    named_to_json,
    parse_debruijn,
    parse_named,
    phi,
    phi_inv,
    show_debruijn,
    show_named,
    sigma,
    supp_abs,
    to_debruijn,
)
from suppsets.checks import alpha_bruteforce, random_term
from suppsets.freenom import EXT_CARRIER, unit
from suppsets.supported import SuppSet

EQ = SymmetryId.EQUALITY

supports = st.sets(st.integers(min_value=0, max_value=9)).map(Support.of)


class TestBSupport:
    def test_shift(self):
        assert b_support(Support.of([1, 3])) == Support.of([0, 2])

    def test_bound_atom_dropped(self):
        assert b_support(Support.of([0])) == Support()

    def test_empty(self):
        assert b_support(Support()) == Support()

    @given(supports)
    def test_double_shift(self, s):
        assert b_support(b_support(s)) == Support.of(a - 2 for a in s if a >= 2)


class TestMaxidx:
    def test_examples(self):
        assert maxidx(Support.of([0, 1])) == 2
        assert maxidx(Support.of([5])) == 6
        assert maxidx(Support()) == 0


class TestSigma:
    def test_rotation(self):
        s2 = sigma(2)
        assert apply(s2, 1) == 2
        assert apply(s2, 2) == 0
        assert apply(s2, 5) == 5

    def test_sigma_zero_is_identity(self):
        assert sigma(0).is_identity()


class TestAlphaEq:
    def test_identity_abstraction(self):
        assert alpha_eq(AbsClass(0, Var(0)), AbsClass(1, Var(1)))

    def test_shared_free_atom(self):
        l = AbsClass(0, App(Var(0), Var(2)))
        r = AbsClass(1, App(Var(1), Var(2)))
        assert alpha_eq(l, r)

    def test_different_supports(self):
        assert not alpha_eq(AbsClass(0, Var(1)), AbsClass(1, Var(0)))

    def test_dataclass_equality_is_alpha(self):
        assert AbsClass(0, Var(0)) == AbsClass(1, Var(1))

    def test_binder_reuse_under_lambda(self):
        # both bind an unused atom over alpha-equal bodies
        assert alpha_eq(AbsClass(0, Lam(0, Var(0))), AbsClass(1, Lam(2, Var(2))))

    @pytest.mark.parametrize("seed", range(30))
    def test_equivalence_relation_on_samples(self, seed):
        rng = Random(seed)
        ts = [random_term(rng, 3, 4) for _ in range(3)]
        abss = [AbsClass(rng.randrange(4), t) for t in ts]
        for a in abss:
            assert alpha_eq(a, a)
        for a in abss:
            for b in abss:
                assert alpha_eq(a, b) == alpha_eq(b, a)
                for c in abss:
                    if alpha_eq(a, b) and alpha_eq(b, c):
                        assert alpha_eq(a, c)


class TestSuppAbs:
    def test_formula(self):
        assert supp_abs(AbsClass(0, App(Var(0), Var(2)))) == Support.of([2])

    def test_closed(self):
        assert supp_abs(AbsClass(0, Var(0))) == Support()

    def test_binder_not_free(self):
        assert supp_abs(AbsClass(3, Var(1))) == Support.of([1])


class TestPhi:
    def test_worked_example(self):
        x = App(Var(0), Var(1))
        a = phi(x)
        assert alpha_eq(a, AbsClass(2, App(Var(2), Var(0))))
        assert supp_abs(a) == Support.of([0])

    def test_closed_body(self):
        x = Lam(0, Var(0))
        a = phi(x)
        assert supp_abs(a) == Support()
        assert alpha_eq(a, AbsClass(1, Lam(0, Var(0))))

    @pytest.mark.parametrize("seed", range(40))
    def test_support_reflection(self, seed):
        x = random_term(Random(seed), 6, 5)
        assert supp_abs(phi(x)) == b_support(free_atoms(x))

    @pytest.mark.parametrize("seed", range(25))
    def test_injective_on_distinct_bodies(self, seed):
        rng = Random(seed)
        x, y = random_term(rng, 4, 4), random_term(rng, 4, 4)
        if alpha_eq_terms(x, y):
            assert alpha_eq(phi(x), phi(y))
        else:
            assert not alpha_eq(phi(x), phi(y))


class TestPhiInv:
    def test_identity_abstraction(self):
        assert phi_inv(AbsClass(0, Var(0))) == Var(0)

    def test_worked_example(self):
        y = phi_inv(AbsClass(2, App(Var(2), Var(0))))
        assert alpha_eq_terms(y, App(Var(0), Var(1)))

    @pytest.mark.parametrize("seed", range(40))
    def test_round_trips(self, seed):
        rng = Random(seed)
        x = random_term(rng, 5, 5)
        assert alpha_eq_terms(phi_inv(phi(x)), x)
        a = AbsClass(rng.randrange(5), random_term(rng, 5, 5))
        assert alpha_eq(phi(phi_inv(a)), a)


class TestPhiNaturality:
    @pytest.mark.parametrize("seed", range(15))
    def test_naturality_for_equivariant_maps(self, seed):
        rng = Random(seed)
        closed = Lam(0, Var(0))
        maps = [
            lambda t: t,
            lambda t: App(t, t),
            lambda t: App(t, closed),
        ]
        f = maps[seed % len(maps)]
        x = random_term(rng, 4, 4)
        lhs = phi(f(x))
        image = phi(x)
        rhs = AbsClass(image.binder, f(image.body))
        assert alpha_eq(lhs, rhs)


class TestPhiOnExtCarrier:
    def test_free_extension_body(self):
        X = SuppSet.of({"x": Support.of([0, 2])})
        e = unit(EQ, X, "x")
        a = phi(e, EXT_CARRIER)
        assert supp_abs(a) == b_support(Support.of([0, 2]))
        back = phi_inv(a)
        assert back == e


class TestDeBruijn:
    def test_binder_and_free_shift(self):
        t = Lam(0, App(Var(0), Var(5)))
        assert to_debruijn(t) == DbLam(DbApp(Idx(0), Idx(6)))

    def test_depth_zero_variable(self):
        assert to_debruijn(Var(3)) == Idx(3)

    def test_shadowing(self):
        t = Lam(0, Lam(0, Var(0)))
        assert to_debruijn(t) == DbLam(DbLam(Idx(0)))

    @pytest.mark.parametrize("seed", range(40))
    def test_round_trip_alpha_identity(self, seed):
        t = random_term(Random(seed), 6, 5)
        assert alpha_eq_terms(from_debruijn(to_debruijn(t)), t)

    @pytest.mark.parametrize("seed", range(40))
    def test_free_indices_match_alpha_support(self, seed):
        t = random_term(Random(seed), 6, 5)
        assert db_free_indices(to_debruijn(t)) == free_atoms(t)

    def test_from_debruijn_avoids_capture(self):
        # the inner binder must not grab the ambient atom 0
        db = DbLam(DbApp(Idx(0), Idx(1)))
        t = from_debruijn(db)
        assert isinstance(t, Lam)
        assert free_atoms(t) == Support.of([0])
        assert alpha_eq_terms(t, Lam(1, App(Var(1), Var(0))))


class TestTripleAgreement:
    @pytest.mark.parametrize("seed", range(60))
    def test_three_deciders_agree(self, seed):
        rng = Random(seed)
        t1 = random_term(rng, 5, 4)
        if seed % 2:
            t2 = from_debruijn(to_debruijn(t1))  # alpha-variant
        else:
            t2 = random_term(rng, 5, 4)
        via_db = to_debruijn(t1) == to_debruijn(t2)
        via_fresh = alpha_eq_terms(t1, t2)
        via_bf = alpha_bruteforce(t1, t2)
        assert via_db == via_fresh == via_bf


class TestActTerm:
    def test_identity(self):
        t = Lam(0, Var(1))
        assert act_term(transposition(EQ, 5, 6), t) == t

    def test_renames_binders_too(self):
        assert act_term(transposition(EQ, 0, 1), Lam(0, Var(1))) == Lam(1, Var(0))

    def test_rejects_other_symmetries(self):
        with pytest.raises(ValueError):
            act_term(transposition(SymmetryId.RENAMING, 0, 1), Var(0))

    @pytest.mark.parametrize("seed", range(20))
    def test_preserves_alpha_classes(self, seed):
        rng = Random(seed)
        t = random_term(rng, 5, 4)
        variant = from_debruijn(to_debruijn(t))
        g = transposition(EQ, rng.randrange(5), rng.randrange(5))
        assert alpha_eq_terms(act_term(g, t), act_term(g, variant))

    def test_action_on_abstractions(self):
        a = AbsClass(0, App(Var(0), Var(2)))
        g = transposition(EQ, 2, 3)
        assert alpha_eq(act_abs(g, a), AbsClass(0, App(Var(0), Var(3))))


class TestSyntax:
    def test_parse_named(self):
        assert parse_named(r"\v0. v0 v2") == Lam(0, App(Var(0), Var(2)))

    def test_parse_debruijn(self):
        assert parse_debruijn(r"\ #0 #6") == DbLam(DbApp(Idx(0), Idx(6)))

    def test_application_associates_left(self):
        assert parse_named("v0 v1 v2") == App(App(Var(0), Var(1)), Var(2))

    def test_lambda_extends_right(self):
        t = parse_named(r"\v0. v0 \v1. v1")
        assert t == Lam(0, App(Var(0), Lam(1, Var(1))))

    def test_bad_input(self):
        with pytest.raises(TermSyntaxError):
            parse_named("(v0")
        with pytest.raises(TermSyntaxError):
            parse_named("x0")

    @pytest.mark.parametrize("seed", range(20))
    def test_print_parse_round_trip(self, seed):
        t = random_term(Random(seed), 5, 5)
        assert parse_named(show_named(t)) == t
        db = to_debruijn(t)
        assert parse_debruijn(show_debruijn(db)) == db


class TestJson:
    @pytest.mark.parametrize("seed", range(10))
    def test_round_trips(self, seed):
        t = random_term(Random(seed), 5, 5)
        assert named_from_json(named_to_json(t)) == t
        db = to_debruijn(t)
        assert debruijn_from_json(debruijn_to_json(db)) == db
