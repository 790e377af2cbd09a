"""Smoke tests for the pyspid extension module."""

import numpy as np

import pyspid


def test_taylor_green_is_rank_one():
    a = pyspid.taylor_green([20, 20], steps=100, dt=0.1, qoi="u1")
    assert a.shape == (400, 100)
    f = pyspid.column_id(a, rank=1)
    approx = pyspid.reconstruct(f["skeleton"], f["coeffs"])
    err = pyspid.rel_frob_error(a, approx)
    assert err <= 1e-12, err
    assert pyspid.compression_factor(400, 100, 500) == 80.0


def test_sub_id_matches_numpy_reconstruction():
    rng = np.random.default_rng(3)
    u = rng.uniform(-1.0, 1.0, size=(30, 1))
    v = rng.uniform(-1.0, 1.0, size=(1, 12))
    a = u @ v
    f = pyspid.sub_id(a, dims=[30], strides=[3], rank=1)
    approx = f["skeleton"] @ f["coeffs"]
    assert pyspid.rel_frob_error(a, approx) <= 1e-10


def test_spid_interpolates_back_to_the_fine_grid():
    a = pyspid.taylor_green([32, 32], steps=40, qoi="u1")
    f = pyspid.spid(a, dims=[32, 32], strides=[2, 2], rank=1, periodic=[True, True])
    assert f["approx"].shape == a.shape
    err = pyspid.rel_frob_error(a, f["approx"])
    assert err <= 5e-2, err


def test_two_stage_streaming_compression():
    a = pyspid.taylor_green([12, 12], steps=50, qoi="u2")
    out = pyspid.two_stage_compress(
        a, dims=[12, 12], blocks=[2, 2], chunk=10, rank=1, workers=4
    )
    assert out["block_ranks"] == [1, 1, 1, 1]
    assert pyspid.rel_frob_error(a, out["approx"]) <= 1e-10
    assert out["cf"] > 10.0


def test_errors_surface_as_python_exceptions():
    try:
        pyspid.column_id(np.zeros((4, 4)), rank=1)
    except pyspid.SpidError as e:
        assert "ZeroMatrix" in str(e)
    else:
        raise AssertionError("expected SpidError")


def main():
    tests = [v for k, v in globals().items() if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok: {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
