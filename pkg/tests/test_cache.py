import os

import pytest

from hecke.cache import ExpansionCache, cache_key, expansion_from_json, expansion_to_json
from hecke.census import Integers, ScanSpec, run_census
from hecke.field import build_field_context
from hecke.rosen import expand

C7 = build_field_context(7)


def test_round_trip(tmp_path):
    cache = ExpansionCache(str(tmp_path))
    for x in (C7(671), C7.lam ** 2 - 1, C7(5)):
        e = expand(x)
        assert expansion_from_json(expansion_to_json(e)) == e
        cache.put(x, e)
        assert cache.get(x) == e
    assert cache.hits == 3


def test_keys_distinguish_fields():
    assert cache_key(C7(2)) != cache_key(build_field_context(9)(2))


def test_budget_guard(tmp_path):
    cache = ExpansionCache(str(tmp_path))
    x = C7(671)
    e = expand(x)
    cache.put(x, e)
    assert cache.get(x, max_steps=e.steps) is None  # a fresh run would not see the repeat
    assert cache.get(x, max_steps=e.steps + 1) == e


def test_undetermined_not_stored(tmp_path):
    cache = ExpansionCache(str(tmp_path))
    x = C7(671)
    cache.put(x, expand(x, max_steps=5))
    assert cache.get(x) is None


def test_corrupt_entry_ignored(tmp_path):
    cache = ExpansionCache(str(tmp_path))
    x = C7(671)
    cache.put(x, expand(x))
    key = cache_key(x)
    with open(os.path.join(str(tmp_path), key[:2], key + ".json"), "w") as fh:
        fh.write("{not json")
    with pytest.warns(UserWarning, match="corrupt"):
        assert cache.get(x) is None


def test_census_with_and_without_cache(tmp_path):
    spec = ScanSpec(7, Integers(660, 720))
    plain = run_census(spec)
    cache = ExpansionCache(str(tmp_path))
    cold = run_census(spec, cache=cache)
    warm = run_census(spec, cache=cache)
    assert plain.to_json() == cold.to_json() == warm.to_json()
    assert cache.hits >= 61
    assert warm.undetermined == 0 and warm.total == 61
