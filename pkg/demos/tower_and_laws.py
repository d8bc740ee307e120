"""Build the first stages of the coherator on a small budget and check a few laws,
then corrupt lambda and watch the checker find the counterexample."""

from glob_coherator import coherator as co
from glob_coherator import theory as th

budget = th.Budget(max_table_len=3, max_entry=1)

for stage in co.build_tower(2, budget):
    s = stage.summary()
    print(f"{s['stage']}: {s['lifts']} lifts")

for law in ("unit-triangle-1", "naturality", "dist-pentagon-mu-i"):
    rep = co.check_law(law, budget=budget, composite=40)
    print(f"{law} {rep.indices}: {rep.verdict} on {rep.samples} samples")

bad = co.check_law("unit-triangle-2", (0, 1), budget, mutation="lambda-swap", composite=20)
ce = bad.counterexamples[0]
print(f"with lambda-swap: {bad.verdict}, {bad.distinct} distinct")
print(f"  {ce['left']}  vs  {ce['right']}")
print(f"  {ce['witness']}")
