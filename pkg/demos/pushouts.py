"""Attach a 1-cell to a groupoid along D^0 -> D^1 and check the pushout conditions."""

from glob_coherator import groups as gr
from glob_coherator import models as md
from glob_coherator import pushout as po

X = md.group_as_groupoid(gr.cyclic(3))
res = po.attach_cell(X, 0, "*")
print(f"{X.name}: {len(X.objects)} object, {len(X.morphisms)} morphisms")
print(f"after attaching: {len(res.X_plus.objects)} objects, {len(res.X_plus.morphisms)} morphisms")
print("pushout condition:", po.check_pushout_condition(X)["verdict"])

for depth in (2, 3):
    rep = po.check_free_pushout_condition(X, 0, sat_depth=depth)
    print(f"free pushout at saturation depth {depth}: {rep['verdict']}")
rep = po.check_free_pushout_condition(X, 0, mutation="drop-inverse")
print("with the inverse dropped:", rep["verdict"], rep["rows"][0]["evidence"]["witness"])
