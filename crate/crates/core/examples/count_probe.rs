fn main() {
    let text = std::fs::read_to_string("corpora/a_christmas_carol.txt").unwrap();
    let doc = arcrank_core::RawDocument::new("a_christmas_carol", text);
    let opts = arcrank_core::PrepOptions::default();
    let normalized = arcrank_core::normalize_text(&doc, &opts);
    let segs = arcrank_core::segment(&normalized, &opts);
    println!("segments: {}", segs.len());
    let words: Vec<usize> = segs.iter().map(|s| s.raw.split_whitespace().count()).collect();
    let tiny = words.iter().filter(|&&w| w <= 2).count();
    println!("tiny (<=2 words): {}", tiny);
    for (i, s) in segs.iter().enumerate() {
        if i >= 300 && i < 330 {
            println!("  [{}] {}", s.index, &s.raw[..s.raw.len().min(90)]);
        }
    }
    // terminal punct distribution
    let mut excl = 0; let mut quest = 0; let mut dot = 0; let mut other = 0;
    for s in &segs {
        match s.raw.chars().last() {
            Some('!') => excl += 1,
            Some('?') => quest += 1,
            Some('.') => dot += 1,
            _ => other += 1,
        }
    }
    println!("ends: .={} !={} ?={} other={}", dot, excl, quest, other);
}
