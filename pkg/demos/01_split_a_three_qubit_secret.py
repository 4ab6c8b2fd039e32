"""
Splitting a three-qubit secret across a pair of GHZ triplets
============================================================

Alice holds a three-qubit secret from a restricted class. Two GHZ triplets
are dealt out so that she also holds two channel qubits, Bob holds three,
and Charlie holds one. Alice measures her five qubits in a 16-outcome
entangled basis and broadcasts the outcome as four classical bits; Charlie
measures his qubit in the Hadamard basis and sends one more bit. Bob then
applies a Pauli correction looked up from those five bits and ends up
holding the secret.
"""

import numpy as np

from ghzsplit import (
    SecretSpec,
    Variant,
    build_channel,
    build_secret,
    run_protocol,
    substream,
)

variant = Variant.THREE_A

# The channel: GHZ (x) GHZ with its qubits dealt to the three parties.
# Four equally weighted kets, nothing else.
channel = build_channel(variant)
print("channel kets:")
for idx in np.flatnonzero(np.abs(channel.amplitudes) > 1e-12):
    print(f"  |{idx:06b}>  amplitude {channel.amplitudes[idx].real:+.3f}")

# A secret in the class alpha|000> + beta|011> + gamma|100> + delta|111>.
secret = SecretSpec(variant, (0.5, 0.5j, -0.5, 0.5))
state = build_secret(secret)
print("\nsecret amplitudes:", np.round(state.amplitudes, 3))

# Force one measurement branch to watch the bookkeeping explicitly.
t = run_protocol(secret, forced=(5, 1))
print("\nforced branch (outcome 5, minus):")
print("  Alice announces   ", t.messages["alice_to_bob"])
print("  Charlie announces ", t.messages["charlie_to_bob"])
print("  Bob applies       ", t.correction)
print("  Bob before        ", np.round(t.bob_state_before.amplitudes, 3))
print("  Bob after         ", np.round(t.bob_state_after.amplitudes, 3))
print("  fidelity          ", t.fidelity)

# Now sample branches the way the protocol actually runs. Every branch is
# equally likely (probability 1/32) and every branch recovers the secret.
rng = substream(2718, 0)
print("\nsampled rounds:")
for k in range(6):
    t = run_protocol(secret, rng=rng)
    print(
        f"  round {k}: cbits {t.alice_cbits} {t.charlie_bit}"
        f"  correction {t.correction}  fidelity {t.fidelity:.12f}"
    )

# The joint outcome distribution is exactly flat, so the classical messages
# leak nothing about the secret.
probs = [w.probability for w in t.probabilities]
print("\nbranch probabilities: min", min(probs), "max", max(probs))
