"""Quick check that the extension imports and agrees with the CLI on a few cases."""

import json

import polyimage

s = polyimage.Structure.trivial(2, "reflexive")
f = polyimage.Poly("y1 z2")
assert (f.m, f.l) == (2, 1)
assert json.loads(polyimage.classify(f, s))["catalog"] == "K+J"

checked = json.loads(polyimage.classify_checked(f, s, primes=[3, 5]))
assert all(c["status"] in ("agree", "bad_reduction") for c in checked["checks"]), checked

# star of (a b; 0 c) is (c b; 0 a)
assert s.star(["1", "2", "3"]) == ["3", "2", "1"]
assert f.evaluate(s, [["1", "0", "1"], ["1", "0", "-1"]]) == ["1", "0", "-1"]

g23, line = polyimage.parse_file(
    "algebra ut3\ngrading z2 degrees (0,1,0)\nvars z1:0 z2:1\npoly 2*z1 z2 + 3*z2 z1\n"
)
assert json.loads(polyimage.classify(line, g23))["catalog"] == "Line(2,3)"

ut3 = polyimage.Structure.trivial(3)
assert not ut3.is_classifiable()
image = json.loads(polyimage.enumerate(polyimage.Poly("z1 z2"), ut3, 3))
assert image["is_vector_space"] is False

clauses = dict((c, ok) for c, ok, _ in polyimage.Structure.validate(3, [0, 1, 1], modulus=3))
assert clauses["compatibility"] is False

assert json.loads(polyimage.lemmas(4))["passed"]
holds, steps = polyimage.constraint_certificate(5)
assert holds and steps
assert json.loads(polyimage.trivial_counterexample(3, 3))["confirmed"]
assert json.loads(polyimage.zn_counterexample(4, 3))["confirmed"]

try:
    polyimage.Structure(3, [0, 1, 1], modulus=3)
except ValueError as e:
    print("rejected:", e)
else:
    raise AssertionError("incompatible grading accepted")

print("smoke test passed")
