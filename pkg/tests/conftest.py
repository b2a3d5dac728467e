"""
Fixtures compartidas: servicios, ejemplos resueltos y datos espectrales calculados una vez.
"""

import copy
import json
import os
import random
from fractions import Fraction

import pytest

from src.config.settings import FixtureConfig
from src.models.algebra_models import LaurentPoly
from src.models.data_models import WeightClass
from src.service_manager import ServiceManager


def fixture_document(name: str) -> dict:
    """Documento JSON del grafo de un ejemplo incluido"""
    with open(FixtureConfig.get_fixture_paths(name)['graph'], encoding='utf-8') as handle:
        return json.load(handle)


def close(a, b, tol: float = 1e-7) -> bool:
    """Error relativo entre dos escalares (exactos o complejos)"""
    a, b = complex(a), complex(b)
    return abs(a - b) <= tol * max(1.0, abs(b))


@pytest.fixture(scope="module")
def services() -> ServiceManager:
    return ServiceManager()


@pytest.fixture
def square_doc() -> dict:
    return copy.deepcopy(fixture_document('square'))


@pytest.fixture(scope="module")
def square(services):
    return services.fixture_service.load_fixture('square')


@pytest.fixture(scope="module")
def hexagon(services):
    return services.fixture_service.load_fixture('hexagon')


@pytest.fixture(scope="module")
def square_octagon(services):
    return services.fixture_service.load_fixture('square_octagon')


@pytest.fixture(scope="module")
def square_spectral(services, square):
    return services.forward_service.forward(square.graph, square.weights)


@pytest.fixture(scope="module")
def hexagon_spectral(services, hexagon):
    return services.forward_service.forward(hexagon.graph, hexagon.weights)


@pytest.fixture(scope="module")
def square_octagon_spectral(services, square_octagon):
    return services.forward_service.forward(square_octagon.graph, square_octagon.weights)


@pytest.fixture
def fixtures_dir() -> str:
    return FixtureConfig.FIXTURES_DIR


# Valores del ejemplo cuadrado: X1 = 2, X2 = 3, X3 = 5, A = 7, B = 11
SQUARE_CASIMIRS = {
    'Z1': Fraction(-1, 231),
    'Z2': Fraction(-210, 11),
    'Z3': Fraction(-77, 5),
    'Z4': Fraction(-11, 14),
}
SQUARE_DIVISOR = (Fraction(1, 42), Fraction(1, 11))

# Ejemplo hexagonal: X1..X4 = 2, 3, 5, 7; A = 11, B = 13
HEXAGON_CASIMIRS = {
    ('w1b3', 1): Fraction(-13 * 13 * 2 * 3 * 7, 11),
    ('w1b1', 1): Fraction(-5, 11 * 13 ** 3 * 4 * 7),
    ('w1b5', 1): Fraction(-11 * 11 * 13 * 2, 3 * 5),
}

# Cuadrado-octógono: X1..X7 = 2, 3, 5, 7, 11, 13, 17; A = 3, B = 5
SQUARE_OCTAGON_CASIMIRS = {
    ('w6b1', 1): Fraction(850),
    ('w3b3', 1): Fraction(116025, 22),
    ('w8b5', 1): Fraction(1, 22),
    ('w1b2', 1): Fraction(1, 51),
    ('w1b1', 1): Fraction(11, 50),
    ('w3b8', 1): Fraction(13, 5),
    ('w8b5', -1): Fraction(2, 13),
    ('w1b1', -1): Fraction(22, 7735),
}


def write_json(directory, name: str, data: dict) -> str:
    path = os.path.join(str(directory), name)
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(data, handle)
    return path


def random_weights(g, rng: random.Random) -> WeightClass:
    """Pesos racionales en [1/4, 4] para todas las caras salvo la raíz"""
    def draw() -> Fraction:
        return Fraction(rng.randint(4, 16), rng.randint(4, 16))

    faces = {fid: draw() for fid in g.faces if fid != g.root_face}
    return WeightClass(faces=faces, A=draw(), B=draw())


def random_gauge(g, rng: random.Random) -> dict:
    return {v: Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9)) for v in g.vertices}


def proportional(f: LaurentPoly, g: LaurentPoly, tol: float = 1e-7) -> bool:
    """f = c·g para alguna constante c, comparando todos los coeficientes"""
    support = set(f.terms) | set(g.terms)
    anchor = max(g.terms, key=lambda m: abs(complex(g.terms[m])))
    ratio = complex(f.coefficient(anchor)) / complex(g.terms[anchor])
    scale = max(abs(complex(c)) for c in f.terms.values())
    return all(
        abs(complex(f.coefficient(m)) - ratio * complex(g.coefficient(m))) <= tol * scale
        for m in support
    )
