"""Fuse partial evidence about a machine, then decide whether to run it.

Two independent reports about the machine's state are combined with
Dempster's rule.  What happens to the batch depends on that state, and
the dependence itself is only partially known, so each conditional is
embedded into the (state, batch) product frame and combined in.  The
batch margin of the result is an ordinary lottery we can price.

Run with:  python3 demos/evidence_pipeline.py
"""

from __future__ import annotations

from bflottery import (
    BfLottery,
    Bpa,
    ConstantIndex,
    Frame,
    OutcomeOrder,
    ProductFrame,
    UtilityAssessment,
    combine_dempster,
    conditional_embedding,
    interval_utility,
    marginalize,
    reduce_to_reference,
    vacuous_extend,
)

STATE = Frame("state", ("fine", "worn", "broken"))
BATCH = Frame("batch", ("done", "scrap"))
JOINT = ProductFrame((("state", STATE), ("batch", BATCH)))


def fuse_reports() -> Bpa:
    log = Bpa(STATE, {"fine": 0.5, STATE.subset(["fine", "worn"]): 0.3, STATE.full(): 0.2})
    sensor = Bpa(STATE, {STATE.subset(["worn", "broken"]): 0.6, STATE.full(): 0.4})
    fused = combine_dempster(log, sensor)
    print(f"Fused state evidence (normalization constant {fused.k:.3f}):")
    for subset, mass in sorted(fused.bpa.focal(), key=lambda p: -p[1]):
        print(f"  {mass:.4f} on {sorted(subset.members())}")
    print(
        "  belief(broken) = "
        f"{fused.bpa.belief(STATE.subset(['broken'])):.4f},"
        " plausibility(broken) = "
        f"{fused.bpa.plausibility(STATE.subset(['broken'])):.4f}\n"
    )
    return fused.bpa


def batch_conditionals() -> list[Bpa]:
    # What the batch does in each state.  A fine machine always delivers,
    # a broken one never does, and a worn one mostly delivers but the
    # maintenance manual refuses to commit further: 0.3 stays on the
    # whole batch frame.
    given = {
        "fine": Bpa(BATCH, {"done": 1.0}),
        "worn": Bpa(BATCH, {"done": 0.7, BATCH.full(): 0.3}),
        "broken": Bpa(BATCH, {"scrap": 1.0}),
    }
    return [
        conditional_embedding(m, JOINT, given="state", value=state)
        for state, m in given.items()
    ]


def main() -> None:
    state_evidence = fuse_reports()
    lifted = Bpa(
        JOINT,
        {vacuous_extend(s, JOINT): mass for s, mass in state_evidence.focal()},
    )
    joint = combine_dempster(lifted, *batch_conditionals()).bpa
    outcome = marginalize(joint, ["batch"])

    print("Implied lottery over the batch:")
    for subset, mass in sorted(outcome.focal(), key=lambda p: -p[1]):
        print(f"  {mass:.4f} on {sorted(subset.members())}")

    ranking = OutcomeOrder(BATCH, ("done", "scrap"))
    lottery = BfLottery(ranking, outcome)
    attitude = UtilityAssessment(
        ranking, {"done": 1.0, "scrap": 0.0}, ConstantIndex(0.8, 0.7)
    )
    triple = reduce_to_reference(lottery, attitude)
    iv = interval_utility(lottery, attitude)
    print(
        f"\nUnder a fairly pessimistic shop owner (alpha 0.8, beta 0.7):"
        f"\n  reduced triple u={triple.u:.4f}, v={triple.v:.4f}, w={triple.w:.4f}"
        f"\n  utility interval [{iv.lo:.4f}, {iv.hi:.4f}]"
    )
    print(
        "  reading: running the job guarantees at least"
        f" {iv.lo:.1%} of the value of a sure success."
    )


if __name__ == "__main__":
    main()
