"""Iris with binarized features: a three-class vote among clause pools.

Each real-valued measurement becomes five bits (three integer, two
fractional), each class gets its own clause pool, and prediction is the
argmax of the pools' vote sums. One pool's clauses stay readable: they are
plain conjunctions over the 20 feature bits.
"""

import numpy as np

from tsetlin import (
    MultiClassTsetlinMachine,
    TsetlinMachine,
    load_iris,
    split_dataset,
)

EPOCHS = 200

ds = load_iris()
print(f"{len(ds)} rows, {ds.n_features} binary features, classes: {', '.join(ds.label_names)}")

rng = np.random.default_rng(3)
train, test = split_dataset(ds, 0.2, rng)

machine = MultiClassTsetlinMachine(
    [TsetlinMachine(ds.n_features, 100, threshold=0.2, specificity=5.0) for _ in range(3)]
)
machine.fit(train.inputs, train.labels, EPOCHS, rng)

print(f"train accuracy {machine.score(train.inputs, train.labels):.3f}, "
      f"test accuracy {machine.score(test.inputs, test.labels):.3f}\n")

bit_names = [f"{feat}.b{k}" for feat in ("sep_len", "sep_wid", "pet_len", "pet_wid") for k in range(5)]
pool = machine.machines[0]
print(f"Sample positive clauses for class '{ds.label_names[0]}':")
shown = 0
for j in range(pool.n_clauses // 2):
    text = pool.clause_text(j, bit_names)
    if text != "<empty>" and shown < 4:
        print(f"  {text}")
        shown += 1

votes = machine.vote_sums(test.inputs[:5])
print("\nVote sums for five test rows (one column per class):")
for row, true_label, pred in zip(votes, test.labels[:5], machine.predict(test.inputs[:5])):
    print(f"  {row} -> predicted {ds.label_names[pred]}, true {ds.label_names[true_label]}")
