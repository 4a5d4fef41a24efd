//! Sharded transposition table shared by parallel root searches.

use std::sync::Mutex;

use rustc_hash::FxHashMap;

const SHARDS: usize = 64;

/// Keys are `(maker mask, breaker mask | mover bit)`. Values are exact scores,
/// so concurrent writers always store the same value for a key.
pub(crate) struct Table {
    shards: Vec<Mutex<FxHashMap<(u64, u64), u32>>>,
}

impl Table {
    pub(crate) fn new() -> Table {
        Table {
            shards: (0..SHARDS).map(|_| Mutex::new(FxHashMap::default())).collect(),
        }
    }

    fn shard(&self, key: (u64, u64)) -> &Mutex<FxHashMap<(u64, u64), u32>> {
        let h = (key.0 ^ key.1.rotate_left(29)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        &self.shards[(h >> 58) as usize]
    }

    pub(crate) fn get(&self, key: (u64, u64)) -> Option<u32> {
        self.shard(key).lock().expect("table lock").get(&key).copied()
    }

    /// Returns true when the key was not present before.
    pub(crate) fn insert(&self, key: (u64, u64), value: u32) -> bool {
        self.shard(key).lock().expect("table lock").insert(key, value).is_none()
    }
}
