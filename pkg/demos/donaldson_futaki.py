# coding: utf-8

# # Donaldson-Futaki invariants from intersection numbers
#
# For the deformation to the normal cone of a point every intersection number
# on the blown-up threefold is forced, so DF can be computed in closed form.
# Only the sign is meaningful.

# In[1]:

import json
from dataclasses import replace
from fractions import Fraction

from kstab.dfcalc import df_certificate, df_log_evaluate, normal_cone_point_table, validate_sign_lemmas
from kstab.picard import DivisorClass, SurfaceModel


# The plane with L = kH gives 6k^2 - 6k.

# In[2]:

P2 = SurfaceModel(0)
for k in range(1, 6):
    t = normal_cone_point_table(P2, DivisorClass(k, []))
    print(k, df_certificate(t).value)


# The anticanonical polarisation of a degree-one del Pezzo surface.

# In[3]:

X = SurfaceModel.dp1()
t = normal_cone_point_table(X, X.anticanonical)
print(json.dumps(df_certificate(t).to_json(), indent=1, sort_keys=True))
print(validate_sign_lemmas(t).ok)


# With a boundary cubic and cone angle 1/2 the log formula needs three more numbers.

# In[4]:

log_table = replace(normal_cone_point_table(P2, P2.H()), Dn1=3, BD=0, Cexc=2)
print(df_log_evaluate(log_table, Fraction(1, 2)))
