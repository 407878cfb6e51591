# coding: utf-8

# # (-1)-curves and the nef cone
#
# On Bl_r P^2 with r <= 8 points in general position, a class is nef exactly
# when it pairs non-negatively with every (-1)-curve (plus H - E1 when r = 1).
# This walk-through lists the curves and uses them as a nef test.

# In[1]:

from kstab.picard import SurfaceModel, enumerate_exceptional, nef_threshold, signature


# Counts for r = 0..8.

# In[2]:

for r in range(9):
    print(r, len(enumerate_exceptional(r)), signature(r))


# The six lines on the blow-up at three points.

# In[3]:

for c in enumerate_exceptional(3):
    print(c)


# How far can we push 3H - E1 - ... - E7 in the -E8 direction before it stops being nef?

# In[4]:

X = SurfaceModel.dp1()
th = nef_threshold(X, X.parse("3H - E1 - ... - E7"), X.E(8))
print(th.value, [str(w) for w in th.witnesses])
