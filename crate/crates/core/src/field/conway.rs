use std::collections::HashMap;
use std::sync::OnceLock;

static RAW: &str = include_str!("../../data/conway.txt");

fn table() -> &'static HashMap<(u32, u32), Vec<u32>> {
    static T: OnceLock<HashMap<(u32, u32), Vec<u32>>> = OnceLock::new();
    T.get_or_init(|| {
        let mut m = HashMap::new();
        for line in RAW.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse().expect("bundled Conway table is well formed"))
                .collect();
            let (p, n) = (nums[0], nums[1]);
            m.insert((p, n), nums[2..].to_vec());
        }
        m
    })
}

/// Coefficients c_0..c_n of the bundled Conway polynomial, if shipped.
pub fn conway_polynomial(p: u32, n: u32) -> Option<Vec<u32>> {
    table().get(&(p, n)).cloned()
}
