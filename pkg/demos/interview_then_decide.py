"""Interview a decision maker, then put the recovered attitude to work.

A founder weighs three offers whose outcomes nobody can put a single
probability on.  We first watch one elicitation interview question by
question, let the remaining subsets be interviewed offstage, and then
rank the offers under the recovered assessment, with the Choquet
envelope and the pignistic point estimate shown as second opinions.

Run with:  python3 demos/interview_then_decide.py
"""

from __future__ import annotations

from bflottery import (
    BfLottery,
    Bpa,
    ElicitationSession,
    ExplicitTable,
    Frame,
    OutcomeOrder,
    SyntheticDm,
    UtilityAssessment,
    choquet_lower,
    choquet_upper,
    compare,
    interval_utility,
    pignistic_utility,
    recover_table,
    solve_indices,
)

FUTURE = Frame("future", ("thrive", "coast", "fold"))
RANKING = OutcomeOrder(FUTURE, ("thrive", "coast", "fold"))
SINGLES = {"thrive": 1.0, "coast": 0.55, "fold": 0.0}

# What the founder actually feels about each ambiguous set of futures.
# In real use these numbers are unknown; here they drive the scripted
# interviewee so the demo is reproducible.
TRUTH = ExplicitTable(
    {
        frozenset(("thrive", "coast")): (0.62, 0.30, 0.08),
        frozenset(("thrive", "fold")): (0.15, 0.70, 0.15),
        frozenset(("coast", "fold")): (0.10, 0.75, 0.15),
        frozenset(("thrive", "coast", "fold")): (0.20, 0.70, 0.10),
    }
)


def watch_one_interview() -> None:
    target = ("thrive", "coast", "fold")
    true_u, true_v, _ = TRUTH.entries[frozenset(target)]
    dm = SyntheticDm(true_u, true_v)
    session = ElicitationSession(target, epsilon=0.02)
    print(f"Interview about the set {set(target)} (epsilon 0.02):")
    while (query := session.next_query()) is not None:
        answer = dm.answer(query)
        session.record(query.seq, answer)
        print(
            f"  q{query.seq:>2}: sure win at {query.probe_u:.4f}"
            f" -> {answer.value}"
        )
    got = session.recovered()
    print(
        f"  pinned down after {len(session.transcript)} questions:"
        f" u={got.u:.4f}, v={got.v:.4f}  (truth was {true_u}, {true_v})"
    )
    alpha, beta = solve_indices(got)
    print(f"  implied pessimism pair: alpha={alpha:.3f}, beta={beta:.3f}\n")


def main() -> None:
    watch_one_interview()

    truth = UtilityAssessment(RANKING, SINGLES, TRUTH)
    print("Interviewing the remaining subsets offstage...")
    assessment = recover_table(truth, epsilon=0.005)

    offers = {
        "steady job": BfLottery(
            RANKING, Bpa(FUTURE, {"coast": 0.9, "fold": 0.1})
        ),
        "funded startup": BfLottery(
            RANKING,
            Bpa(
                FUTURE,
                {
                    FUTURE.subset(["thrive", "coast"]): 0.6,
                    "fold": 0.15,
                    FUTURE.full(): 0.25,
                },
            ),
        ),
        "moonshot": BfLottery(
            RANKING,
            Bpa(
                FUTURE,
                {"thrive": 0.05, FUTURE.full(): 0.95},
            ),
        ),
    }

    print("\nOffer summary under the recovered attitude:")
    for name, lot in offers.items():
        iv = interval_utility(lot, assessment)
        lo = choquet_lower(lot, SINGLES)
        hi = choquet_upper(lot, SINGLES)
        pig = pignistic_utility(lot, SINGLES)
        print(
            f"  {name:<15} interval [{iv.lo:.3f}, {iv.hi:.3f}]"
            f"  envelope [{lo:.3f}, {hi:.3f}]  pignistic {pig:.3f}"
        )

    print("\nPairwise verdicts (row versus column):")
    names = list(offers)
    for a in names:
        for b in names:
            if a >= b:
                continue
            verdict = compare(offers[a], offers[b], assessment)
            print(f"  {a}  vs  {b}:  {verdict.value}")


if __name__ == "__main__":
    main()
