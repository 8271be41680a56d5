"""Extensions of finite Gamma-groups, nonabelian H^2 and their comparison.

Modules: :mod:`groups` (tables, automorphisms), :mod:`galois_model`
(Gamma-groups, outer actions), :mod:`cohomology` (2-cocycles and H^2),
:mod:`extensions` (classification, twisting, Baer sums), :mod:`reduction`
(stable subgroups, torsion and devissage) and :mod:`cli`.
"""

__version__ = "0.1.0"
