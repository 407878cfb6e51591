# coding: utf-8

# # Certified region for a degree-one del Pezzo family
#
# We polarise the blow-up of the plane at eight general points by
# L = 3H - E1 - ... - E7 - lambda*E8 and ask for which lambda the alpha
# criterion certifies K-stability. Everything below is exact: endpoints come
# back as quadratic surds, not floats.

# In[1]:

from fractions import Fraction

from kstab.alpha import dp1_alpha_lower
from kstab.picard import SurfaceModel, is_ample, is_nef
from kstab.region import ample_domain, certified_region, dp1_family, region_report
from kstab.stability import check_criterion


# The surface model carries the two hypotheses the built-in alpha bound needs
# (general position, no cuspidal anticanonical curve).

# In[2]:

X = SurfaceModel.dp1()
family = dp1_family(X)
print(family.describe())
print(X.hypotheses())


# Where is L ample at all? The sextic 6H - 2(E1 + ... + E7) - 3E8 stops it at 4/3.

# In[3]:

print([str(iv) for iv in ample_domain(family)])
print(is_nef(X, family.at(Fraction(4, 3))).ok, is_ample(X, family.at(Fraction(4, 3))).ok)


# Now the region itself, with the constraint that binds at each end.

# In[4]:

result = certified_region(family)
print(region_report(result))


# Spot checks against the pointwise criterion: lambda = 1 is the anticanonical
# polarisation, lambda = 6/5 is past the upper endpoint.

# In[5]:

for lam in (Fraction(1), Fraction(6, 5)):
    cert = check_criterion(X, family.at(lam), dp1_alpha_lower(lam, X))
    print(lam, cert.verdict.value, result.contains(lam))


# The full audit trail for lambda = 1.

# In[6]:

print(check_criterion(X, family.at(Fraction(1)), 1).audit_trail())
