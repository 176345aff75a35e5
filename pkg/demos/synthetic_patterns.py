"""Mixed-granularity patterns: why one global specificity is a compromise.

The synthetic task hides two coarse patterns (x1=0: the label just copies
x2) and two fine ones (x1=1: the label is the parity of x3..x6). A classic
Tsetlin Machine must pick one specificity s for all clauses; the
multigranular machine spreads a whole range over its clauses and needs no
such choice.
"""

import numpy as np

from tsetlin import MultigranularTsetlinMachine, TsetlinMachine, generate_synthetic

EPOCHS = 200
CLAUSES = 100

rng = np.random.default_rng(7)
train = generate_synthetic(300, rng)
test = generate_synthetic(300, rng)

print(f"{len(train)} train / {len(test)} test examples, "
      f"P(y=1) = {train.labels.mean():.2f}\n")

for s in (3.0, 35.0, 150.0):
    machine = TsetlinMachine(train.n_features, CLAUSES, threshold=0.03, specificity=s)
    machine.fit(train.inputs, train.labels, EPOCHS, np.random.default_rng(1))
    print(f"classic TM, s = {s:5.1f}: test accuracy {machine.score(test.inputs, test.labels):.3f}")

mtm = MultigranularTsetlinMachine(train.n_features, CLAUSES, threshold=0.02)
mtm.fit(train.inputs, train.labels, EPOCHS, np.random.default_rng(1))
print(f"multigranular, s-free: test accuracy {mtm.score(test.inputs, test.labels):.3f}")

print("\nSome learned positive clauses (clause: specificity -> conjunction):")
shown = 0
for j in range(CLAUSES // 2):
    text = mtm.clause_text(j)
    if text != "<empty>" and shown < 6:
        print(f"  clause {j:3d}: s = {mtm.specificity[j]:6.1f} -> {text}")
        shown += 1
print("\nCoarse patterns (e.g. ~x1 & x2) suit low s; the x1 & parity patterns")
print("need high-s clauses that pin down many literals at once.")
