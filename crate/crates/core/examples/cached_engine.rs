//! Memoized computation backed by the write-once disk cache.
use std::time::Instant;

use cue_genus::cache::DiskCache;
use cue_genus::engine::Engine;

fn main() {
    let dir = std::env::temp_dir().join("cue-genus-example-cache");
    let _ = std::fs::remove_dir_all(&dir);

    let start = Instant::now();
    let cold = Engine::with_cache(DiskCache::new(&dir));
    let f = cold.f_table(30, 3).unwrap();
    println!("cold: F table D=30 G=3 in {:.2?}", start.elapsed());

    let start = Instant::now();
    let warm = Engine::with_cache(DiskCache::new(&dir));
    assert_eq!(warm.f_table(30, 3).unwrap(), f);
    println!("warm: same table from disk in {:.2?}", start.elapsed());
    println!("F_3^30 = {}", f.get(30, 3));

    let cache = DiskCache::new(&dir);
    for entry in cache.inspect().unwrap() {
        println!("  {} ({} bytes) {}", entry.file, entry.bytes, entry.problem.as_deref().unwrap_or("ok"));
    }

    // damage one entry: reads now fail, gc removes it
    std::fs::write(dir.join("F-D30-G3.json"), "{}").unwrap();
    println!("after damage: {}", Engine::with_cache(DiskCache::new(&dir)).f_table(30, 3).unwrap_err());
    println!("gc: {:?}", cache.gc().unwrap());
    let _ = std::fs::remove_dir_all(&dir);
}
