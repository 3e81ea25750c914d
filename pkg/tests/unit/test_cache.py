"""Tests for the memo cache."""

from rdlab.utils.cache import CacheManager, MemoryCache, memo


def test_memory_cache_evicts_oldest():
    cache = MemoryCache(max_entries=2)
    cache.set("a", 1)
    cache.set("b", 2)
    cache.set("c", 3)
    assert not cache.exists("a")
    assert cache.get("c") == 3


def test_get_or_build_builds_once(mocker):
    manager = CacheManager(MemoryCache())
    builder = mocker.Mock(return_value=("F", 49))
    first = manager.get_or_build("field", builder, 7, 2)
    second = manager.get_or_build("field", builder, 7, 2)
    assert first is second
    builder.assert_called_once()
    stats = manager.get_stats()
    assert stats['hits'] == 1
    assert stats['misses'] == 1
    assert stats['hit_rate'] == "50.0%"


def test_keys_separate_namespaces():
    assert CacheManager.create_key("field", 7) != CacheManager.create_key("group", 7)
    assert CacheManager.create_key("f", a=1, b=2) == CacheManager.create_key("f", b=2, a=1)


def test_process_memo_is_shared():
    assert memo() is memo()
