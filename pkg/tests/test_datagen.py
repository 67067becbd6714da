import numpy as np
import pytest

from robust_cic.datagen import (
    BIVARIATE_GAMMA,
    GAUSSIAN_MIXTURE_2D,
    ILLUSTRATIVE_PAIR,
    MULTIVARIATE_GAMMA,
    GammaLatent,
    MixtureLatent,
    ProductionPair,
    gen_comonotone_pair,
    generate_quad,
    latent_spec,
    load_quad,
    read_measure,
    sample_latent,
    save_quad,
)
from robust_cic.errors import DimensionMismatchError, InvalidInputError, ParseError


def test_illustrative_pair_is_comonotone():
    np.testing.assert_allclose(ILLUSTRATIVE_PAIR.H0.T @ ILLUSTRATIVE_PAIR.H1, 0.75 * np.eye(2))


@pytest.mark.parametrize("d", [1, 2, 5, 20])
def test_generated_pair_satisfies_product_constraint(d):
    pair = gen_comonotone_pair(d, seed=d)
    assert np.abs(pair.H0.T @ pair.H1 - pair.B).max() <= 1e-10
    np.testing.assert_array_equal(np.diag(pair.H0), np.ones(d))
    assert np.all(np.diag(pair.B) >= 0)
    again = gen_comonotone_pair(d, seed=d)
    np.testing.assert_array_equal(pair.H1, again.H1)


@pytest.mark.parametrize("pair", [ILLUSTRATIVE_PAIR, gen_comonotone_pair(5, seed=11)], ids=["illustrative", "random-d5"])
def test_production_maps_are_comonotone(pair):
    rng = np.random.default_rng(40)
    x, y = rng.normal(size=(100, pair.d)) * 3, rng.normal(size=(100, pair.d)) * 3
    inner = np.einsum("ij,ij->i", pair.h0(x) - pair.h0(y), pair.h1(x) - pair.h1(y))
    assert np.all(inner >= -1e-9)


def test_production_pair_validation():
    with pytest.raises(InvalidInputError):
        ProductionPair(np.eye(2), np.eye(2), np.array([[1.0, 0.1], [0.1, 1.0]]))
    with pytest.raises(InvalidInputError):
        ProductionPair(np.zeros((2, 2)), np.eye(2), np.eye(2))
    with pytest.raises(DimensionMismatchError):
        ProductionPair(np.eye(2), np.eye(3), np.eye(2))
    identity = ProductionPair.identity(3)
    np.testing.assert_array_equal(identity.h1(np.ones((2, 3))), np.ones((2, 3)))


def test_latent_parameters_are_validated():
    with pytest.raises(InvalidInputError):
        GammaLatent(shapes=(1.0, -1.0), scales=(1.0, 1.0))
    with pytest.raises(InvalidInputError):
        MixtureLatent(means=((0.0, 1.0),), stds=((1.0, 0.0),), weights=(0.5, 0.5))
    with pytest.raises(InvalidInputError):
        latent_spec("cauchy")


def test_gamma_latent_mean():
    spec = latent_spec(BIVARIATE_GAMMA)
    sample = sample_latent(spec, "control", 200_000, seed=0)
    np.testing.assert_allclose(sample.mean(), spec.control.mean(), rtol=0.02)


def test_mixture_latent_mean():
    spec = latent_spec(GAUSSIAN_MIXTURE_2D)
    sample = sample_latent(spec, "treatment", 200_000, seed=0)
    np.testing.assert_allclose(sample.mean(), spec.treatment.mean(), atol=0.02)


def test_generate_quad_shapes_and_reproducibility():
    spec = latent_spec(MULTIVARIATE_GAMMA, d=4)
    pair = gen_comonotone_pair(4, seed=1)
    quad = generate_quad(spec, pair, n=50, seed=9)
    for measure in quad.measures().values():
        assert measure.points.shape == (50, 4)
    again = generate_quad(spec, pair, n=50, seed=9)
    np.testing.assert_array_equal(quad.y0t.points, again.y0t.points)
    other = generate_quad(spec, pair, n=50, seed=10)
    assert not np.array_equal(quad.y0t.points, other.y0t.points)
    assert quad.meta["production_seed"] == pair.seed


def test_generate_quad_rejects_mismatched_pair():
    with pytest.raises(DimensionMismatchError):
        generate_quad(latent_spec(MULTIVARIATE_GAMMA, d=3), ILLUSTRATIVE_PAIR, n=10, seed=0)


def test_coupled_quad_shares_latents_across_time():
    quad = generate_quad(latent_spec(BIVARIATE_GAMMA), ILLUSTRATIVE_PAIR, n=30, seed=4, coupled=True)
    u0 = np.linalg.solve(ILLUSTRATIVE_PAIR.H0, quad.y0c.points.T)
    u1 = np.linalg.solve(ILLUSTRATIVE_PAIR.H1, quad.y1c.points.T)
    np.testing.assert_allclose(u0, u1, atol=1e-9)


def test_quad_round_trip(tmp_path):
    quad = generate_quad(latent_spec(GAUSSIAN_MIXTURE_2D), ILLUSTRATIVE_PAIR, n=25, seed=2)
    written = save_quad(quad, tmp_path / "quad")
    assert len(written) == 4
    loaded = load_quad(tmp_path / "quad")
    for name, measure in quad.measures().items():
        np.testing.assert_array_equal(loaded.measures()[name].points, measure.points)
        np.testing.assert_array_equal(loaded.measures()[name].weights, measure.weights)


def test_read_measure_reports_bad_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("dim_0,weight\n1.0,0.5\nabc,0.5\n")
    with pytest.raises(ParseError) as excinfo:
        read_measure(path)
    assert excinfo.value.line == 3
