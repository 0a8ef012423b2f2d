"""Reference reduction, utility intervals, and preference verdicts."""

from __future__ import annotations

import random

import pytest

from bflottery.bpa import Bpa
from bflottery.errors import ValidationError
from bflottery.frames import Frame
from bflottery.lottery import BfLottery, OutcomeOrder
from bflottery.utility import (
    ConstantIndex,
    ExplicitTable,
    PairwiseIndex,
    PreferenceVerdict,
    UtilityAssessment,
    UtilityInterval,
    affine_transform,
    choquet_lower,
    choquet_upper,
    compare,
    interval_bound_dominance,
    interval_utility,
    jaffray_utility,
    pignistic_transform,
    pignistic_utility,
    reduce_to_reference,
    reduce_to_reference_oracle,
)

import oracles
from conftest import random_bpa, to_naive

PAYOFF = Frame("payoff", ("$100", "$0"))
ORDER = OutcomeOrder(PAYOFF, ("$100", "$0"))
WIN_LOSE = {"$100": 1.0, "$0": 0.0}


def money_assessment(u_a: float, v_a: float) -> UtilityAssessment:
    """Two outcomes; the undecided set {win, lose} is worth (u_a, v_a)."""
    table = ExplicitTable({frozenset(PAYOFF.labels): (u_a, v_a, 1.0 - u_a - v_a)})
    return UtilityAssessment(ORDER, WIN_LOSE, table)


def ellsberg_lotteries():
    win, lose, either = PAYOFF.subset(["$100"]), PAYOFF.subset(["$0"]), PAYOFF.full()
    return {
        "L1": BfLottery(ORDER, Bpa(PAYOFF, {win: 1 / 3, lose: 2 / 3})),
        "L2": BfLottery(ORDER, Bpa(PAYOFF, {lose: 1 / 3, either: 2 / 3})),
        "L3": BfLottery(ORDER, Bpa(PAYOFF, {win: 1 / 3, either: 2 / 3})),
        "L4": BfLottery(ORDER, Bpa(PAYOFF, {win: 2 / 3, lose: 1 / 3})),
    }


def random_ranked_frame(rng: random.Random, n: int, id: str) -> OutcomeOrder:
    frame = Frame(id, tuple(f"o{i}" for i in range(n)))
    return OutcomeOrder(frame, frame.labels)


def random_singletons(rng: random.Random, order: OutcomeOrder) -> dict[str, float]:
    n = order.frame.size
    inner = sorted((rng.random() for _ in range(n - 2)), reverse=True)
    values = [1.0, *inner, 0.0]
    return dict(zip(order.ranking, values))


def random_table_assessment(rng: random.Random, order: OutcomeOrder) -> UtilityAssessment:
    """Arbitrary simplex triples for every non-singleton subset."""
    singles = random_singletons(rng, order)
    entries = {}
    labels = order.frame.labels
    for bits in range(1, 1 << len(labels)):
        if bits.bit_count() < 2:
            continue
        key = frozenset(l for i, l in enumerate(labels) if bits >> i & 1)
        cuts = sorted((rng.random(), rng.random()))
        entries[key] = (cuts[0], 1.0 - cuts[1], cuts[1] - cuts[0])
    return UtilityAssessment(order, singles, ExplicitTable(entries))


def random_index_assessment(rng: random.Random, order: OutcomeOrder) -> UtilityAssessment:
    beta = rng.random()
    alpha = beta + (1.0 - beta) * rng.random()
    return UtilityAssessment(
        order, random_singletons(rng, order), ConstantIndex(alpha, beta)
    )


# ------------------------------------------------------------ focal triples


def test_singleton_triples_are_forced():
    frame = Frame("f", ("top", "mid", "low"))
    order = OutcomeOrder(frame, frame.labels)
    a = UtilityAssessment(
        order, {"top": 1.0, "mid": 0.4, "low": 0.0}, ConstantIndex(1.0, 1.0)
    )
    t = a.focal_utility(["mid"])
    assert (t.u, t.v, t.w) == (0.4, 0.6, 0.0)


def test_index_triple_worked_example():
    # alpha 0.8, beta 0.6 on the full (worst, best) spread gives (0.2, 0.6, 0.2)
    a = UtilityAssessment(ORDER, WIN_LOSE, ConstantIndex(0.8, 0.6))
    t = a.focal_utility(PAYOFF.full())
    assert t.u == pytest.approx(0.2, abs=1e-15)
    assert t.v == pytest.approx(0.6, abs=1e-15)
    assert t.w == pytest.approx(0.2, abs=1e-15)


def test_index_triple_rather_pessimistic_bettor():
    # the (0.2, 0.7, 0.1) triple corresponds to alpha 0.8, beta 0.7
    a = UtilityAssessment(ORDER, WIN_LOSE, ConstantIndex(0.8, 0.7))
    t = a.focal_utility(PAYOFF.full())
    assert t.u == pytest.approx(0.2, abs=1e-15)
    assert t.v == pytest.approx(0.7, abs=1e-15)
    assert t.w == pytest.approx(0.1, abs=1e-15)


def test_pairwise_index_lookup():
    frame = Frame("f", ("top", "mid", "low"))
    order = OutcomeOrder(frame, frame.labels)
    model = PairwiseIndex({("low", "top"): (1.0, 0.0), ("low", "mid"): (0.5, 0.5)})
    a = UtilityAssessment(order, {"top": 1.0, "mid": 0.4, "low": 0.0}, model)
    spread = a.focal_utility(frame.full())
    assert (spread.u, spread.v) == (0.0, 0.0)
    mid = a.focal_utility(["mid", "low"])
    assert mid.u == pytest.approx(0.2)
    assert mid.w == 0.0
    with pytest.raises(ValidationError):
        a.focal_utility(["top", "mid"])  # no pair assessed


def test_model_validation():
    with pytest.raises(ValidationError):
        ConstantIndex(0.3, 0.8)  # beta above alpha
    with pytest.raises(ValidationError):
        ConstantIndex(1.2, 0.5)
    with pytest.raises(ValidationError):
        UtilityAssessment(ORDER, {"$100": 0.9, "$0": 0.0}, ConstantIndex(1, 1))
    with pytest.raises(ValidationError):
        UtilityAssessment(ORDER, {"$100": 1.0, "$0": 0.2}, ConstantIndex(1, 1))
    with pytest.raises(ValidationError):
        UtilityAssessment(ORDER, {"$100": 1.0}, ConstantIndex(1, 1))
    with pytest.raises(ValidationError):  # not weakly decreasing along the ranking
        frame = Frame("f", ("w", "x", "y", "z"))
        UtilityAssessment(
            OutcomeOrder(frame, frame.labels),
            {"w": 1.0, "x": 0.2, "y": 0.5, "z": 0.0},
            ConstantIndex(1, 1),
        )


def test_table_validation():
    bad_sum = ExplicitTable({frozenset(PAYOFF.labels): (0.5, 0.6, 0.1)})
    with pytest.raises(ValidationError):
        UtilityAssessment(ORDER, WIN_LOSE, bad_sum)
    bad_singleton = ExplicitTable(
        {
            frozenset(PAYOFF.labels): (0.2, 0.7, 0.1),
            frozenset({"$100"}): (0.8, 0.2, 0.0),
        }
    )
    with pytest.raises(ValidationError):
        UtilityAssessment(ORDER, WIN_LOSE, bad_singleton)
    missing = money_assessment(0.2, 0.7)
    frame3 = Frame("f3", ("a", "b", "c"))
    with pytest.raises(ValidationError):
        UtilityAssessment(
            OutcomeOrder(frame3, frame3.labels),
            {"a": 1.0, "b": 0.5, "c": 0.0},
            ExplicitTable({}),
        ).focal_utility(["a", "b"])
    # but a consistent singleton row is allowed
    ok = ExplicitTable(
        {
            frozenset(PAYOFF.labels): (0.2, 0.7, 0.1),
            frozenset({"$100"}): (1.0, 0.0, 0.0),
        }
    )
    UtilityAssessment(ORDER, WIN_LOSE, ok)
    _ = missing


# --------------------------------------------------------------- reduction


def test_reduction_of_classic_urn_bets():
    lots = ellsberg_lotteries()
    a = money_assessment(0.2, 0.6)
    r1 = reduce_to_reference(lots["L1"], a)
    assert (r1.u, r1.v, r1.w) == (pytest.approx(1 / 3), pytest.approx(2 / 3), 0.0)
    iv2 = interval_utility(lots["L2"], a)
    assert iv2.lo == pytest.approx(2 / 15, abs=1e-12)
    assert iv2.hi == pytest.approx(4 / 15, abs=1e-12)
    iv3 = interval_utility(lots["L3"], a)
    assert iv3.lo == pytest.approx(7 / 15, abs=1e-12)
    assert iv3.hi == pytest.approx(3 / 5, abs=1e-12)
    iv4 = interval_utility(lots["L4"], a)
    assert iv4.lo == iv4.hi == pytest.approx(2 / 3, abs=1e-12)


def test_closed_form_matches_constructed_reduction():
    rng = random.Random(608)
    for trial in range(150):
        order = random_ranked_frame(rng, rng.randint(2, 4), f"R{trial}")
        a = random_table_assessment(rng, order)
        lot = BfLottery(order, random_bpa(rng, order.frame, 5))
        direct = reduce_to_reference(lot, a)
        built = reduce_to_reference_oracle(lot, a)
        assert direct.u == pytest.approx(built.u, abs=1e-9)
        assert direct.v == pytest.approx(built.v, abs=1e-9)
        assert direct.w == pytest.approx(built.w, abs=1e-9)


def test_constructed_reduction_requires_normalized_scale():
    a = affine_transform(money_assessment(0.2, 0.7), 2.0, 0.1)
    lot = ellsberg_lotteries()["L2"]
    with pytest.raises(ValidationError):
        reduce_to_reference_oracle(lot, a)


# ------------------------------------------------- envelopes and transforms


def test_choquet_and_pignistic_match_oracles():
    rng = random.Random(1203)
    for trial in range(100):
        order = random_ranked_frame(rng, rng.randint(2, 5), f"C{trial}")
        u = random_singletons(rng, order)
        lot = BfLottery(order, random_bpa(rng, order.frame, 5))
        naive = to_naive(lot.m)
        assert choquet_lower(lot, u) == pytest.approx(
            oracles.choquet_lower(naive, u), abs=1e-12
        )
        assert choquet_upper(lot, u) == pytest.approx(
            oracles.choquet_upper(naive, u), abs=1e-12
        )
        assert pignistic_utility(lot, u) == pytest.approx(
            oracles.pignistic_utility(naive, u), abs=1e-12
        )
        bet = pignistic_transform(lot.m)
        want = oracles.pignistic(naive)
        for label, p in want.items():
            assert bet.mass([label]) == pytest.approx(p, abs=1e-12)


def test_interval_sits_inside_choquet_envelope():
    rng = random.Random(77)
    for trial in range(150):
        order = random_ranked_frame(rng, rng.randint(2, 5), f"E{trial}")
        a = random_index_assessment(rng, order)
        lot = BfLottery(order, random_bpa(rng, order.frame, 5))
        iv = interval_utility(lot, a)
        lo = choquet_lower(lot, a)
        hi = choquet_upper(lot, a)
        assert lo - 1e-12 <= iv.lo <= iv.hi <= hi + 1e-12
        assert 0.0 <= iv.lo - -1e-12 and iv.hi <= 1.0 + 1e-12


def test_index_extremes_hit_the_envelope():
    rng = random.Random(4242)
    for trial in range(40):
        order = random_ranked_frame(rng, rng.randint(2, 4), f"X{trial}")
        singles = random_singletons(rng, order)
        lot = BfLottery(order, random_bpa(rng, order.frame, 4))
        lo = choquet_lower(lot, singles)
        hi = choquet_upper(lot, singles)
        pessimist = UtilityAssessment(order, singles, ConstantIndex(1.0, 1.0))
        iv = interval_utility(lot, pessimist)
        assert iv.lo == pytest.approx(lo, abs=1e-12)
        assert iv.hi == pytest.approx(lo, abs=1e-12)
        optimist = UtilityAssessment(order, singles, ConstantIndex(0.0, 0.0))
        iv = interval_utility(lot, optimist)
        assert iv.lo == pytest.approx(hi, abs=1e-12)
        assert iv.hi == pytest.approx(hi, abs=1e-12)
        agnostic = UtilityAssessment(order, singles, ConstantIndex(1.0, 0.0))
        iv = interval_utility(lot, agnostic)
        assert iv.lo == pytest.approx(lo, abs=1e-12)
        assert iv.hi == pytest.approx(hi, abs=1e-12)


def test_affine_transform_worked_example():
    a = money_assessment(0.2, 0.7)
    lot = BfLottery(ORDER, Bpa.deterministic(PAYOFF, PAYOFF.full()))
    assert interval_utility(lot, a).lo == pytest.approx(0.2)
    shifted = affine_transform(a, 1.0, 1.0)
    iv = interval_utility(lot, shifted)
    assert iv.lo == pytest.approx(1.2, abs=1e-12)
    assert iv.hi == pytest.approx(1.3, abs=1e-12)
    assert not shifted.normalized
    with pytest.raises(ValidationError):
        affine_transform(a, -2.0, 0.0)
    with pytest.raises(ValidationError):
        affine_transform(a, 0.0, 0.5)


def test_jaffray_scalar():
    bayes = BfLottery(ORDER, Bpa.bayesian(PAYOFF, {"$100": 0.3, "$0": 0.7}))
    a = money_assessment(0.2, 0.7)
    assert jaffray_utility(bayes, a) == pytest.approx(0.3, abs=1e-15)
    undecided = ellsberg_lotteries()["L2"]
    with pytest.raises(ValidationError):
        jaffray_utility(undecided, a)
    collapsed = money_assessment(0.25, 0.75)
    assert jaffray_utility(undecided, collapsed) == pytest.approx(
        2 / 3 * 0.25, abs=1e-15
    )


def test_bayesian_lotteries_collapse_all_criteria():
    rng = random.Random(2025)
    for trial in range(60):
        order = random_ranked_frame(rng, rng.randint(2, 5), f"B{trial}")
        singles = random_singletons(rng, order)
        weights = [rng.random() + 0.01 for _ in order.frame.labels]
        total = sum(weights)
        probs = {lab: w / total for lab, w in zip(order.frame.labels, weights)}
        lot = BfLottery(order, Bpa.bayesian(order.frame, probs))
        a = random_index_assessment(rng, order)
        expected = sum(probs[lab] * singles[lab] for lab in order.frame.labels)
        a = UtilityAssessment(order, singles, a.model)
        iv = interval_utility(lot, a)
        assert iv.width <= 1e-12
        for value in (
            iv.lo,
            jaffray_utility(lot, a),
            pignistic_utility(lot, a),
            choquet_lower(lot, a),
            choquet_upper(lot, a),
        ):
            assert value == pytest.approx(expected, abs=1e-12)


# ------------------------------------------------------------- comparisons


def test_verdicts_for_the_classic_bets():
    lots = ellsberg_lotteries()
    a = money_assessment(0.2, 0.6)  # any v above one half works here
    assert compare(lots["L1"], lots["L2"], a) is PreferenceVerdict.STRICTLY_PREFERRED
    assert compare(lots["L4"], lots["L3"], a) is PreferenceVerdict.STRICTLY_PREFERRED
    assert compare(lots["L2"], lots["L1"], a) is PreferenceVerdict.STRICTLY_DISPREFERRED
    assert compare(lots["L1"], lots["L1"], a) is PreferenceVerdict.INDIFFERENT


def test_nested_intervals_are_incomparable():
    lots = ellsberg_lotteries()
    a = money_assessment(0.1, 0.2)  # wide undecided band around one third
    assert compare(lots["L1"], lots["L2"], a) is PreferenceVerdict.INCOMPARABLE
    assert compare(lots["L2"], lots["L1"], a) is PreferenceVerdict.INCOMPARABLE


def test_near_ties_count_as_equal():
    lots = ellsberg_lotteries()
    a = money_assessment(0.5, 0.5 - 5e-10)
    b = money_assessment(0.5, 0.5)
    r_a = reduce_to_reference(lots["L2"], a)
    r_b = reduce_to_reference(lots["L2"], b)
    assert abs(r_a.v - r_b.v) < 1e-9
    assert compare(lots["L2"], lots["L2"], a) is PreferenceVerdict.INDIFFERENT


def test_strong_mode_is_stricter():
    lots = ellsberg_lotteries()
    a = money_assessment(0.2, 0.6)
    # interval order ranks L4 over L2; the strong relation must too, since
    # L4's guaranteed 2/3 clears L2's optimistic 4/15.
    assert compare(lots["L4"], lots["L2"], a, mode="strong") is (
        PreferenceVerdict.STRICTLY_PREFERRED
    )
    # shifted intervals [0.4, 0.8] vs [0.3, 0.7]: the pointwise order ranks
    # the first one higher, but the intervals overlap, so the strong
    # relation abstains
    wide = money_assessment(0.1, 0.3)
    win, lose, full = (
        PAYOFF.subset(["$100"]),
        PAYOFF.subset(["$0"]),
        PAYOFF.full(),
    )
    upper = BfLottery(ORDER, Bpa(PAYOFF, {win: 1 / 3, full: 2 / 3}))
    lower = BfLottery(ORDER, Bpa(PAYOFF, {win: 7 / 30, lose: 0.1, full: 2 / 3}))
    assert interval_utility(upper, wide).lo == pytest.approx(0.4)
    assert interval_utility(upper, wide).hi == pytest.approx(0.8)
    assert interval_utility(lower, wide).lo == pytest.approx(0.3)
    assert interval_utility(lower, wide).hi == pytest.approx(0.7)
    assert compare(upper, lower, wide) is PreferenceVerdict.STRICTLY_PREFERRED
    assert compare(upper, lower, wide, mode="strong") is (
        PreferenceVerdict.INCOMPARABLE
    )
    with pytest.raises(ValidationError):
        compare(lots["L1"], lots["L2"], a, mode="fancy")


def test_interval_order_is_a_partial_preorder():
    rng = random.Random(8080)
    order = random_ranked_frame(rng, 3, "Q")
    a = random_index_assessment(rng, order)
    lots = [BfLottery(order, random_bpa(rng, order.frame, 4)) for _ in range(12)]
    good = {PreferenceVerdict.STRICTLY_PREFERRED, PreferenceVerdict.INDIFFERENT}
    for x in lots:
        assert compare(x, x, a) is PreferenceVerdict.INDIFFERENT
    for x in lots:
        for y in lots:
            fwd = compare(x, y, a)
            rev = compare(y, x, a)
            mirror = {
                PreferenceVerdict.STRICTLY_PREFERRED: PreferenceVerdict.STRICTLY_DISPREFERRED,
                PreferenceVerdict.STRICTLY_DISPREFERRED: PreferenceVerdict.STRICTLY_PREFERRED,
                PreferenceVerdict.INDIFFERENT: PreferenceVerdict.INDIFFERENT,
                PreferenceVerdict.INCOMPARABLE: PreferenceVerdict.INCOMPARABLE,
            }
            assert rev is mirror[fwd]
    for x in lots:
        for y in lots:
            for z in lots:
                if compare(x, y, a) in good and compare(y, z, a) in good:
                    assert compare(x, z, a) in good


def test_bound_dominance_and_its_refinement():
    # a huge short-odds lottery against a tiny sure thing: the envelope
    # cannot rank them, whatever the decision maker's attitude
    frame = Frame("draw", ("$100", "$0"))
    order = OutcomeOrder(frame, ("$100", "$0"))
    sure = BfLottery(order, Bpa(frame, {"$100": 0.001, "$0": 0.999}))
    vague = BfLottery(order, Bpa.vacuous(frame))
    assert interval_bound_dominance(vague, sure, WIN_LOSE) is (
        PreferenceVerdict.INCOMPARABLE
    )

    rng = random.Random(606)
    good = {PreferenceVerdict.STRICTLY_PREFERRED, PreferenceVerdict.INDIFFERENT}
    for trial in range(120):
        o = random_ranked_frame(rng, rng.randint(2, 4), f"D{trial}")
        a = random_index_assessment(rng, o)
        x = BfLottery(o, random_bpa(rng, o.frame, 4))
        y = BfLottery(o, random_bpa(rng, o.frame, 4))
        coarse = interval_bound_dominance(x, y, a)
        fine = compare(x, y, a)
        if coarse is PreferenceVerdict.STRICTLY_PREFERRED:
            assert fine in good
        elif coarse is PreferenceVerdict.STRICTLY_DISPREFERRED:
            assert fine not in {PreferenceVerdict.STRICTLY_PREFERRED}
        elif coarse is PreferenceVerdict.INDIFFERENT:
            assert fine is PreferenceVerdict.INDIFFERENT


def test_affine_transforms_preserve_every_verdict():
    rng = random.Random(515)
    for trial in range(60):
        order = random_ranked_frame(rng, rng.randint(2, 4), f"T{trial}")
        a = (
            random_table_assessment(rng, order)
            if trial % 2
            else random_index_assessment(rng, order)
        )
        x = BfLottery(order, random_bpa(rng, order.frame, 4))
        y = BfLottery(order, random_bpa(rng, order.frame, 4))
        before = compare(x, y, a)
        for _ in range(5):
            scale = rng.uniform(0.1, 10.0)
            shift = rng.uniform(-5.0, 5.0)
            moved = affine_transform(a, scale, shift)
            assert compare(x, y, moved) is before
            assert interval_bound_dominance(x, y, moved) is (
                interval_bound_dominance(x, y, a)
            )


def test_interval_type_invariants():
    iv = UtilityInterval(0.2, 0.3)
    assert iv.width == pytest.approx(0.1)
    assert 0.25 in iv and 0.5 not in iv
    with pytest.raises(ValidationError):
        UtilityInterval(0.4, 0.2)
