use nalgebra::DVector;

/// Euclidean projection onto the probability simplex by the sort-and-shift
/// rule: with entries sorted descending, find the largest prefix whose
/// shifted values stay positive and clip everything at that shift.
pub fn simplex_project(v: &DVector<f64>) -> DVector<f64> {
    let mut sorted: Vec<f64> = v.iter().copied().collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    let mut shift = sorted[0] - 1.0;
    for (i, &s) in sorted.iter().enumerate() {
        cum += s;
        let t = (cum - 1.0) / (i as f64 + 1.0);
        if s - t > 0.0 {
            shift = t;
        } else {
            break;
        }
    }
    v.map(|x| (x - shift).max(0.0))
}
