import os
import subprocess
import sys

import numpy as np
import pytest

from mparith import _kernels as K

from oracle import rng


def _pairs(seed, count=40):
    r = rng(seed)
    for _ in range(count):
        a = r.getrandbits(r.randint(1, 2000))
        b = r.getrandbits(r.randint(1, 2000))
        yield a, b


BACKENDS = [("numpy", K.np_school_mul, K.np_add, K.np_sub, K.np_add_into, K.np_sub_into)]
if K.HAVE_NUMBA:
    BACKENDS.append(("numba", K.nb_school_mul, K.nb_add, K.nb_sub, K.nb_add_into, K.nb_sub_into))


@pytest.mark.parametrize("name,mul,add,sub,add_into,sub_into", BACKENDS, ids=[b[0] for b in BACKENDS])
def test_backend_ops_exact(name, mul, add, sub, add_into, sub_into):
    for a, b in _pairs(1):
        la, lb = K.int_to_limbs(a), K.int_to_limbs(b)
        assert K.limbs_to_int(mul(la, lb)) == a * b
        assert K.limbs_to_int(add(la, lb)) == a + b
        hi, lo = max(a, b), min(a, b)
        assert K.limbs_to_int(sub(K.int_to_limbs(hi), K.int_to_limbs(lo))) == hi - lo
        # in-place accumulation at a limb offset
        r = np.zeros(la.size + lb.size + 4, dtype=np.uint64)
        r[:la.size] = la
        add_into(r, lb, 2)
        assert K.limbs_to_int(r) == a + (b << 64)
        sub_into(r, lb, 2)
        assert K.limbs_to_int(r) == a


def test_limb_roundtrip():
    for a, _ in _pairs(2):
        assert K.limbs_to_int(K.int_to_limbs(a)) == a
    assert K.int_to_limbs(0).size == 0
    assert K.strip(np.array([5, 0, 0], dtype=np.uint64)).size == 1


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, MPARITH_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from mparith import _kernels as K; print(K.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    assert out == "numpy"
