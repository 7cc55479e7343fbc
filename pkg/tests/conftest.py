import os
import tempfile

# One disk cache for the whole test session, isolated from the user's cache.
_CACHE = tempfile.mkdtemp(prefix="bpx-test-cache-")
os.environ.setdefault("BPX_CACHE_DIR", _CACHE)
