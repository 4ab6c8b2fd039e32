"""
Basis encodings, their defects, and the restricted secret class
===============================================================

Alice's 16-outcome measurement basis can be written two ways: a canonical
generator form (bit flips and phase flips applied to an anchor vector) and
the literal sign expansion printed in the reference tables. The two forms
disagree on half the outcome labels because the literal expansion swaps the
two phase exponents. Both are valid orthonormal bases; only the labeling
differs. The four-qubit variant is worse off: its literal form repeats one
basis vector outright.

The protocol also only works for secrets inside a four-dimensional class.
For anything outside, probability mass leaks out of the span of Alice's
basis and the run is refused.
"""

import numpy as np

from ghzsplit import (
    OutOfSpanError,
    Variant,
    build_alice_basis,
    random_arbitrary_secret,
    run_protocol,
    substream,
    verify_span,
    verify_table,
)

# Compare the two encodings vector by vector.
canonical = build_alice_basis(Variant.THREE_A, "canonical")
literal = build_alice_basis(Variant.THREE_A, "literal")
differing = [
    i
    for i in range(16)
    if np.max(np.abs(literal.vectors[i].amplitudes - canonical.vectors[i].amplitudes))
    > 1e-12
]
print("outcome labels where the encodings disagree:", differing)

report = verify_table(Variant.THREE_A)
note = report.formula_inconsistencies[0]
print("reported as:", note["kind"])
print("label pairing:", note["relabeling"])

# The four-qubit literal basis is not a basis at all: its Gram matrix has an
# off-diagonal 1 where the duplicated vectors meet.
four_literal = build_alice_basis(Variant.FOUR, "literal")
print("\nfour-qubit literal Gram defects:")
for i, j, gram in four_literal.gram_defects():
    print(f"  <v{i}|v{j}> = {gram.real:+.1f}")

# Verification against the literal encoding flags the anomaly and the rows
# that stop working because of it.
report = verify_table(Variant.FOUR, encoding="literal")
print("anomalies:", [a["kind"] for a in report.basis_anomalies])
print(
    "rows broken by the duplication:",
    [
        (r.alice_outcome, r.charlie_bit)
        for r in report.rows
        if r.status == "MISMATCH"
    ],
)

# Restriction enforcement: in-class secrets project fully onto the basis
# span, arbitrary states do not and are rejected.
for variant in Variant:
    span = verify_span(variant)
    print(
        f"\n{variant.value}: worst in-class span deficit "
        f"{span.max_valid_deficit:.2e}, smallest out-of-class leak "
        f"{span.min_invalid_out_of_span:.3f}"
    )

rng = substream(99, 7)
rogue = random_arbitrary_secret(Variant.THREE_A, rng)
try:
    run_protocol(rogue, variant=Variant.THREE_A, seed=0)
except OutOfSpanError as exc:
    print("\narbitrary secret rejected:", exc)
