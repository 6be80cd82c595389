"""Write a small set of input files for trying the CLI by hand.

Curves on S_{1,2}: an octagon pair (a, b) and a principal pair (pa, pb),
the Thurston-Veech word phi = T_pa T_pb^-1 and a uniform step measure on
the twists about pa, pb and phi with their inverses."""
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from conftest import S12_OCTAGON, S12_PRINCIPAL_4, pair  # noqa: E402


def main(out):
    os.makedirs(out, exist_ok=True)
    a, b = pair(S12_OCTAGON)
    pa, pb = pair(S12_PRINCIPAL_4)
    for name, c in (("a", a), ("b", b), ("pa", pa), ("pb", pb)):
        with open(os.path.join(out, f"{name}.json"), "w") as fh:
            fh.write(c.dumps())
    phi = [{"curve": "pa.json", "power": 1}, {"curve": "pb.json", "power": -1}]
    words = [[{"curve": c, "power": s}] for c in ("pa.json", "pb.json") for s in (1, -1)]
    words += [phi, [{"curve": "pb.json", "power": 1}, {"curve": "pa.json", "power": -1}]]
    mu = [{"mapping_class": w, "weight_numerator": 1, "weight_denominator": len(words)} for w in words]
    for name, data in (("phi", phi), ("mu", mu)):
        with open(os.path.join(out, f"{name}.json"), "w") as fh:
            json.dump(data, fh, indent=1)
    print(out)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "demo_inputs")
