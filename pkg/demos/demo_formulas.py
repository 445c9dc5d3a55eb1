"""Tour of the formula language: parsing, inspection, evaluation, printing.

Run:  python demos/demo_formulas.py
"""

from indikit import (
    DivisionByZeroError,
    UnknownDependencyError,
    evaluate,
    free_variables,
    parse,
    unparse,
)


def main():
    # parse once, evaluate many times
    cpi = parse("EV / AC")
    print("CPI formula:", unparse(cpi), "reads", sorted(free_variables(cpi)))
    for month, (ev, ac) in {"Jan": (120, 100), "Feb": (250, 260), "Mar": (400, 450)}.items():
        print(f"  {month}: CPI = {evaluate(cpi, {'EV': ev, 'AC': ac}):.3f}")

    # precedence works the usual way; printing is canonical and lossless
    tree = parse("0.4*(Rs+50)*T/(T+15)")
    print("\ncanonical form:", unparse(tree))
    print("forced grouping:", unparse(tree, full_parens=True))
    assert parse(unparse(tree)) == tree

    # trigonometry in radians, with the pi constant built in
    sunset = parse("arccos(-tan(lat * pi / 180) * tan(delta))")
    print("\nsunset hour angle at 48°N, spring:",
          round(evaluate(sunset, {"lat": 48, "delta": 0.1}), 4), "rad")

    # errors carry the offending subexpression
    try:
        evaluate(parse("BAC / (EV / AC) - 1"), {"BAC": 1000, "EV": 0, "AC": 450})
    except DivisionByZeroError as exc:
        print("\nevaluation failure:", exc)

    # the registry uses free_variables to refuse dangling references
    from indikit import AgentRuntime, ModelEntry, RegisterModel

    with AgentRuntime() as runtime:
        reply = runtime.request(RegisterModel(ModelEntry("M", "demo", "EV - AC", "currency")))
        print("\nregistering 'EV - AC' with an empty catalog:", reply.payload.error)
        assert isinstance(reply.payload.error, UnknownDependencyError)
        print("supervisor logged:", runtime.anomalies()[0].detail)


if __name__ == "__main__":
    main()
