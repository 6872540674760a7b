"""Quick end-to-end check of the pkn extension module."""

import pkn

RULE = (
    "weather of ?place includes rainy implies weather of ?place includes cloudy"
    " (strength high, inverse low)"
)


def main():
    g = pkn.Graph(RULE)
    assert g.add("weather of Paris includes rainy\nweather of London includes cloudy") == [1, 2]
    assert len(g) == 3

    v = g.ask("weather of Paris includes cloudy")
    assert (v.stance, v.certainty) == ("supported", "high"), v
    assert "implication-forward" in v.explanation
    v = g.ask("weather of London includes rainy")
    assert (v.stance, v.certainty) == ("supported", "low"), v

    assert g.query("which ?p where weather of ?p includes rainy") == ["Paris"]
    assert g.query("count ?p where weather of ?p includes cloudy") == 1

    roses = pkn.Graph("\n".join(f"rose{i} kind-of rose" for i in range(10)))
    roses.add("color of rose0 includes yellow\ncolor of rose1 includes yellow")
    few = roses.query("few ?r where ?r kind-of rose and color of ?r includes yellow from ?r kind-of rose")
    assert few == (True, 2, 10, 0.2), few

    animals = pkn.Graph("dog parent-of puppy\ncat parent-of kitten")
    assert animals.complete_analogy("dog", "puppy", "cat")[0] == ("kitten", "high")

    ttl = pkn.Graph("flowers of Netherlands includes daffodils, tulips (certainty high)").to_turtle()
    assert "a pkn:Property" in ttl

    assert pkn.check("Paul likes John") == []
    assert pkn.check("Paul likes John\nof of")[0].startswith("2:")
    assert pkn.quantize(0.75) == "high"
    try:
        g.add("oops of")
    except pkn.PknError:
        pass
    else:
        raise AssertionError("bad input was accepted")
    assert len(g) == 3

    print("python smoke test passed")


if __name__ == "__main__":
    main()
