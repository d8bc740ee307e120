"""Homotopy groups of a few small groupoid models."""

from glob_coherator import groups as gr
from glob_coherator import homotopy as ho
from glob_coherator import models as md
from glob_coherator.globset import sphere

circle = md.free_groupoid(sphere(1))
print("pi_1 of the free groupoid on S^1:", ho.pi_k(circle, 1, "s0").describe())

iso = md.walking_iso()
print("pi_0 of the walking iso:", ho.pi0(iso))
print("pi_1 of the walking iso at x has order", ho.pi_k(iso, 1, "x").order)

M = md.two_model(md.group_as_groupoid(gr.cyclic(2)), A=gr.cyclic(3))
print("a 2-model with pi_1 = Z2, pi_2 = Z3:", M.X.counts)
print("  pi_2 order", ho.pi_k(M, 2, "*").order, "abelian:", ho.eckmann_hilton_check(M, "*")["abelian"])

pt = md.groupoid_to_model(md.point())
A = md.groupoid_to_model(iso)
f = md.ModelMap(pt, A, {pt.find("x"): A.find("x"), pt.find("1x"): A.find("1x")})
print("point -> walking iso:", ho.is_weak_equivalence(f).verdict)
print("same map after d_embed:", ho.is_weak_equivalence(md.map_d_embed(f)).verdict)
