/// `h_m(x)` from `h_{k+1} = x h_k - k h_{k-1}`, `h_0 = 1`, `h_1 = x`.
pub fn hermite_eval(m: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if m == 0 {
        return prev;
    }
    for k in 1..m {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Writes `h_0(x), ..., h_{out.len()-1}(x)`.
pub fn hermite_values(x: f64, out: &mut [f64]) {
    for k in 0..out.len() {
        out[k] = match k {
            0 => 1.0,
            1 => x,
            _ => x * out[k - 1] - (k - 1) as f64 * out[k - 2],
        };
    }
}

pub fn factorial(j: usize) -> f64 {
    (1..=j).fold(1.0, |acc, k| acc * k as f64)
}
