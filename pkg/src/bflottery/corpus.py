"""Bundled worked examples, each with its own built-in answer key.

Every example builds real objects, runs the library on them, and reports
both the results and a list of checks against independently computed
values.  ``bf examples run <name>`` prints all of it, so a failing check
after an install points at a broken build rather than a typo in user
input.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .bpa import Bpa, combine_dempster, conditional_embedding, marginalize
from .errors import ValidationError
from .frames import Frame, ProductFrame
from .lottery import BfLottery, CompoundLottery, OutcomeOrder, reduce_compound
from .utility import (
    ExplicitTable,
    UtilityAssessment,
    compare,
    interval_bound_dominance,
    interval_utility,
    pignistic_utility,
)
from .wire import interval_to_dict

PAYOFF = Frame("payoff", ("$100", "$0"))
ORDER = OutcomeOrder(PAYOFF, ("$100", "$0"))
CHECK_TOLERANCE = 1e-12


def _attitude(u_a: float, v_a: float) -> UtilityAssessment:
    table = ExplicitTable({frozenset(PAYOFF.labels): (u_a, v_a, 1.0 - u_a - v_a)})
    return UtilityAssessment(ORDER, {"$100": 1.0, "$0": 0.0}, table)


def _check(name: str, value, expected) -> dict:
    if isinstance(value, bool) or isinstance(expected, bool):
        ok = value is expected
    else:
        ok = abs(value - expected) <= CHECK_TOLERANCE
    return {"name": name, "value": value, "expected": expected, "ok": ok}


def _interval_checks(name: str, iv, lo, hi) -> list[dict]:
    return [
        _check(f"{name}.lower", iv.lo, lo),
        _check(f"{name}.upper", iv.hi, hi),
    ]


def ellsberg(n: int = 90) -> dict:
    """One urn, 30 red balls, 60 black or yellow in unknown proportion.

    Bets pay $100: L1 on red, L2 on black, L3 on red-or-yellow, L4 on
    black-or-yellow.  People tend to pick L1 over L2 but L4 over L3, which
    no single probability measure allows.  A mildly pessimistic attitude
    toward the undecided set produces exactly that pattern.  ``n`` is
    accepted for interface uniformity and ignored.
    """
    win, lose, either = PAYOFF.subset(["$100"]), PAYOFF.subset(["$0"]), PAYOFF.full()
    bets = {
        "L1": BfLottery(ORDER, Bpa(PAYOFF, {win: Fraction(1, 3), lose: Fraction(2, 3)})),
        "L2": BfLottery(ORDER, Bpa(PAYOFF, {lose: Fraction(1, 3), either: Fraction(2, 3)})),
        "L3": BfLottery(ORDER, Bpa(PAYOFF, {win: Fraction(1, 3), either: Fraction(2, 3)})),
        "L4": BfLottery(ORDER, Bpa(PAYOFF, {win: Fraction(2, 3), lose: Fraction(1, 3)})),
    }
    attitude = _attitude(0.2, 0.6)
    intervals = {k: interval_utility(v, attitude) for k, v in bets.items()}
    checks = [
        *_interval_checks("L1", intervals["L1"], 1 / 3, 1 / 3),
        *_interval_checks("L2", intervals["L2"], 2 / 15, 4 / 15),
        *_interval_checks("L3", intervals["L3"], 7 / 15, 3 / 5),
        *_interval_checks("L4", intervals["L4"], 2 / 3, 2 / 3),
        _check(
            "L1 over L2",
            compare(bets["L1"], bets["L2"], attitude).value == "strictly_preferred",
            True,
        ),
        _check(
            "L4 over L3",
            compare(bets["L4"], bets["L3"], attitude).value == "strictly_preferred",
            True,
        ),
        _check(
            "pignistic ties L1 with L2",
            abs(
                pignistic_utility(bets["L1"], attitude)
                - pignistic_utility(bets["L2"], attitude)
            )
            <= 1e-12,
            True,
        ),
    ]
    return {
        "description": "the classic paired bets on a 30/60 urn, ranked with a "
        "mildly pessimistic attitude (u=0.2, v=0.6) toward the undecided set",
        "results": {
            "intervals": {k: interval_to_dict(v) for k, v in intervals.items()},
            "verdicts": {
                "L1 vs L2": compare(bets["L1"], bets["L2"], attitude).value,
                "L4 vs L3": compare(bets["L4"], bets["L3"], attitude).value,
            },
            "pignistic": {
                k: pignistic_utility(v, attitude) for k, v in bets.items()
            },
        },
        "checks": checks,
    }


def one_red_ball(n: int = 10) -> dict:
    """An urn of ``n`` balls with exactly one red; the rest unseen.

    Betting on red is fully determined: win with chance 1/n.  Betting on
    black rides on the unseen balls, which may each be black or yellow.
    The attitude decides: bet black wins the comparison exactly when both
    attitude components clear 1/(n-1).
    """
    if n < 2:
        raise ValidationError(f"need at least 2 balls, got {n}")
    u_a, v_a = 0.2, 0.7
    attitude = _attitude(u_a, v_a)
    win, lose, either = PAYOFF.subset(["$100"]), PAYOFF.subset(["$0"]), PAYOFF.full()
    on_red = BfLottery(
        ORDER, Bpa(PAYOFF, {win: Fraction(1, n), lose: Fraction(n - 1, n)})
    )
    on_black = BfLottery(
        ORDER, Bpa(PAYOFF, {lose: Fraction(1, n), either: Fraction(n - 1, n)})
    )
    iv_red = interval_utility(on_red, attitude)
    iv_black = interval_utility(on_black, attitude)
    threshold = 1.0 / (n - 1)
    verdict = compare(on_black, on_red, attitude)
    expect_preferred = u_a > threshold and (1.0 - v_a) > threshold
    checks = [
        *_interval_checks("bet on red", iv_red, 1 / n, 1 / n),
        *_interval_checks(
            "bet on black", iv_black, (n - 1) / n * u_a, (n - 1) / n * (1.0 - v_a)
        ),
        _check(
            "bet on black preferred iff both components clear 1/(n-1)",
            verdict.value == "strictly_preferred",
            expect_preferred,
        ),
    ]
    return {
        "description": f"one known red ball among {n}; bet on red against bet "
        f"on black under attitude (u=0.2, v=0.7); the tipping point is "
        f"1/(n-1) = {threshold:.6g}",
        "results": {
            "threshold": threshold,
            "intervals": {
                "bet on red": interval_to_dict(iv_red),
                "bet on black": interval_to_dict(iv_black),
            },
            "verdict": {"bet on black vs bet on red": verdict.value},
        },
        "checks": checks,
    }


def thousand_balls(n: int = 1000) -> dict:
    """Two urns of numbered balls; only one has a known composition.

    Ball 687 wins.  The known urn holds one ball of each number, so betting
    on it is worth exactly 1/n.  The other urn's composition is wholly
    unknown: a vacuous lottery whose utility is the bare attitude interval.
    Any decision maker with u above 1/n picks the unknown urn, which is why
    people look ambiguity-seeking here.  Envelope bounds alone cannot rank
    the two at all.
    """
    if n < 2:
        raise ValidationError(f"need at least 2 balls, got {n}")
    u_a, v_a = 0.2, 0.7
    attitude = _attitude(u_a, v_a)
    win, lose = PAYOFF.subset(["$100"]), PAYOFF.subset(["$0"])
    known_urn = BfLottery(
        ORDER, Bpa(PAYOFF, {win: Fraction(1, n), lose: Fraction(n - 1, n)})
    )
    unknown_urn = BfLottery(ORDER, Bpa.vacuous(PAYOFF))
    iv_known = interval_utility(known_urn, attitude)
    iv_unknown = interval_utility(unknown_urn, attitude)
    verdict = compare(unknown_urn, known_urn, attitude)
    dominance = interval_bound_dominance(unknown_urn, known_urn, attitude)
    checks = [
        *_interval_checks("known urn", iv_known, 1 / n, 1 / n),
        *_interval_checks("unknown urn", iv_unknown, u_a, 1.0 - v_a),
        _check(
            "unknown urn wins once u clears 1/n",
            verdict.value == "strictly_preferred",
            u_a > 1.0 / n,
        ),
        _check("envelope bounds cannot rank them", dominance.value == "incomparable", True),
    ]
    return {
        "description": f"{n} numbered balls per urn, one urn of unknown "
        "composition: the attitude picks a winner while bound dominance "
        "stays silent",
        "results": {
            "intervals": {
                "known urn": interval_to_dict(iv_known),
                "unknown urn": interval_to_dict(iv_unknown),
            },
            "verdict": {"unknown urn vs known urn": verdict.value},
            "bound_dominance": dominance.value,
        },
        "checks": checks,
    }


def two_urn_compound(n: int = 0) -> dict:
    """A bet whose prize is itself a bet, collapsed to a single lottery.

    The outer evidence puts 1/3 on facing a known 1/3-chance urn and the
    remaining 2/3 on not knowing which of the two urns it is.  Reduction
    through the joint (choice, outcome) frame loses no mass and lands on
    masses 1/9, 10/27, 14/27.  ``n`` is ignored.
    """
    win, lose, either = PAYOFF.subset(["$100"]), PAYOFF.subset(["$0"]), PAYOFF.full()
    inner_known = BfLottery(
        ORDER, Bpa(PAYOFF, {win: Fraction(1, 3), lose: Fraction(2, 3)})
    )
    inner_vague = BfLottery(
        ORDER, Bpa(PAYOFF, {lose: Fraction(1, 3), either: Fraction(2, 3)})
    )
    compound = CompoundLottery.build(
        [inner_known, inner_vague], [((0,), Fraction(1, 3)), ((0, 1), Fraction(2, 3))]
    )
    reduced = reduce_compound(compound)
    attitude = _attitude(0.2, 0.6)
    iv = interval_utility(reduced, attitude)
    checks = [
        _check("mass on win", reduced.m.mass(win), 1 / 9),
        _check("mass on loss", reduced.m.mass(lose), 10 / 27),
        _check("undecided mass", reduced.m.mass(either), 14 / 27),
        _check("interval lower", iv.lo, 1 / 9 + 14 / 27 * 0.2),
        _check("interval upper", iv.hi, 1 / 9 + 14 / 27 * 0.4),
    ]
    return {
        "description": "an ambiguous choice between a known-mix bet and an "
        "unknown-mix bet, reduced to one lottery over the payoff frame",
        "results": {
            "reduced_masses": {
                "win": reduced.m.mass(win),
                "loss": reduced.m.mass(lose),
                "undecided": reduced.m.mass(either),
            },
            "interval": interval_to_dict(iv),
        },
        "checks": checks,
    }


def conditional_embedding_demo(n: int = 0) -> dict:
    """Carry 'if the source is reliable, the report is accurate' into a joint.

    The conditional lives on the report frame; its embedding into the
    (source, report) product commits to nothing about the source, commits
    to nothing about the report on its own, and hands back the original
    conditional when combined with certainty about reliability.  All three
    statements hold exactly, not approximately.  ``n`` is ignored.
    """
    source = Frame("source", ("reliable", "unreliable"))
    report = Frame("report", ("accurate", "inaccurate"))
    joint = ProductFrame((("source", source), ("report", report)))
    conditional = Bpa(report, {"accurate": 0.8, report.full(): 0.2})
    embedded = conditional_embedding(
        conditional, joint, given="source", value="reliable", target="report"
    )
    source_marginal = marginalize(embedded, ["source"])
    report_marginal = marginalize(embedded, ["report"])
    certainty = Bpa.deterministic(
        joint, joint.subset([("reliable", "accurate"), ("reliable", "inaccurate")])
    )
    recovered = marginalize(
        combine_dempster(embedded, certainty).bpa, ["report"]
    )
    focal_cells = {
        "|".join(",".join(cell) for cell in sorted(subset.members())): mass
        for subset, mass in embedded.focal()
    }
    checks = [
        _check(
            "mass carried onto the big conditional set",
            embedded.mass(
                joint.subset(
                    [
                        ("reliable", "accurate"),
                        ("unreliable", "accurate"),
                        ("unreliable", "inaccurate"),
                    ]
                )
            ),
            0.8,
        ),
        _check("slack mass stays on the whole joint", embedded.mass(joint.full()), 0.2),
        _check(
            "says nothing about the source",
            source_marginal == Bpa.vacuous(source),
            True,
        ),
        _check(
            "says nothing about the report alone",
            report_marginal == Bpa.vacuous(report),
            True,
        ),
        _check(
            "combining with certainty recovers the conditional exactly",
            recovered == conditional,
            True,
        ),
    ]
    return {
        "description": "a conditional mass assignment embedded in a product "
        "frame without inventing knowledge, then recovered exactly",
        "results": {"embedded_focal": focal_cells},
        "checks": checks,
    }


EXAMPLES: dict[str, Callable[[int], dict]] = {
    "ellsberg": ellsberg,
    "one-red-ball": one_red_ball,
    "thousand-balls": thousand_balls,
    "two-urn-compound": two_urn_compound,
    "conditional-embedding": conditional_embedding_demo,
}


def run_example(name: str, n: int = 0) -> dict:
    if name not in EXAMPLES:
        known = ", ".join(sorted(EXAMPLES))
        raise ValidationError(f"unknown example {name!r}; pick one of: {known}")
    builder = EXAMPLES[name]
    result = builder(n) if n else builder()
    result["example"] = name
    result["ok"] = all(check["ok"] for check in result["checks"])
    return result
