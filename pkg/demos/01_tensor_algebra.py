"""Tour of the tensor algebra: t-products, the dense oracle, and the t-SVD.

A third-order tensor is an n1 x n2 matrix of length-n3 tubes. Multiplying two
of them circularly convolves tubes where ordinary matrix multiplication would
multiply scalars, which turns into independent complex matrix products after
an FFT along the tubes. Everything here is checked against the explicit
block-circulant matrix picture.
"""

import numpy as np

import tubalstream as ts


def main():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((4, 3, 5))
    b = rng.standard_normal((3, 2, 5))

    # the FFT-domain product agrees with the dense block-circulant oracle
    c = ts.tprod(a, b)
    oracle = ts.fold(ts.bcirc(a) @ ts.unfold(b), 4, 2, 5)
    print("t-product vs block-circulant oracle:", np.linalg.norm(c - oracle))

    # identity element and transpose anti-homomorphism
    eye = ts.identity_tensor(4, 5)
    print("identity law |I*A - A|:", np.linalg.norm(ts.tprod(eye, a) - a))
    lhs = ts.conj_transpose(ts.tprod(a, b))
    rhs = ts.tprod(ts.conj_transpose(b), ts.conj_transpose(a))
    print("transpose anti-homomorphism:", np.linalg.norm(lhs - rhs))

    # a product of rank-3 factors has tubal rank 3, and the t-SVD finds it
    low = ts.gen_low_tubal_rank(20, 30, 8, 3, seed=1)
    factors = ts.tsvd(low)
    print("tubal rank of constructed tensor:", ts.tubal_rank(low))
    print("t-SVD reconstruction NRMSE:", ts.nrmse(ts.reconstruct(factors), low))

    # singular tubes past the true rank carry no energy
    norms = ts.singular_tube_norms(factors)
    print("leading singular tube norms:", np.round(norms[:5], 6))

    # truncation at the true rank is lossless; below it, it is the best we can do
    trunc = ts.truncate(factors, 3)
    print("rank-3 truncation NRMSE:", ts.nrmse(ts.reconstruct(trunc), low))


if __name__ == "__main__":
    main()
