use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swopt_project::synth::dyadic_simplex_row;
use swopt_project::{pwm, DyadicWeights};

fn unit_row(q: usize, i: usize) -> DVector<f64> {
    let mut r = DVector::zeros(q);
    r[i] = 1.0;
    r
}

#[test]
fn constant_first_mode_yields_the_dyadic_grid() {
    let n = 3u32;
    let weights = DyadicWeights::new(n, vec![unit_row(2, 0); 8]).unwrap();
    let (rows, partition) = pwm(&weights, n).unwrap();
    assert_eq!(partition.num_samples(), 1 + 2 * 8);
    assert_eq!(rows.len(), 16);
    let w = 0.125;
    for k in 0..8 {
        // both per-frame samples land on the next grid point: mode 1 takes
        // the whole frame and mode 2 is left a zero-length interval
        assert_eq!(partition.samples()[1 + 2 * k], (k + 1) as f64 * w);
        assert_eq!(partition.samples()[2 + 2 * k], (k + 1) as f64 * w);
        assert_eq!(rows[2 * k], unit_row(2, 0));
        assert_eq!(rows[2 * k + 1], unit_row(2, 1));
        let len = partition.samples()[1 + 2 * k] - partition.samples()[2 * k];
        assert_eq!(len, w);
    }
}

#[test]
fn even_split_alternates_modes_on_quarter_cells() {
    let weights =
        DyadicWeights::new(1, vec![DVector::from_vec(vec![0.5, 0.5]); 2]).unwrap();
    let (rows, partition) = pwm(&weights, 1).unwrap();
    assert_eq!(partition.samples(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
    assert_eq!(rows[0], unit_row(2, 0));
    assert_eq!(rows[1], unit_row(2, 1));
    assert_eq!(rows[2], unit_row(2, 0));
    assert_eq!(rows[3], unit_row(2, 1));
}

#[test]
fn zero_weight_mode_keeps_a_zero_length_interval() {
    let row = DVector::from_vec(vec![0.5, 0.0, 0.5]);
    let weights = DyadicWeights::new(0, vec![row]).unwrap();
    let (rows, partition) = pwm(&weights, 0).unwrap();
    assert_eq!(partition.samples(), &[0.0, 0.5, 0.5, 1.0]);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1], unit_row(3, 1));
    assert_eq!(partition.delta(1), 0.0);
}

#[test]
fn weights_may_be_finer_than_the_frame_grid() {
    // only the left endpoint of each frame is sampled
    let rows_in = vec![
        DVector::from_vec(vec![1.0, 0.0]),
        DVector::from_vec(vec![0.0, 1.0]),
        DVector::from_vec(vec![0.25, 0.75]),
        DVector::from_vec(vec![0.0, 1.0]),
    ];
    let weights = DyadicWeights::new(2, rows_in).unwrap();
    let (rows, partition) = pwm(&weights, 1).unwrap();
    assert_eq!(partition.samples(), &[0.0, 0.5, 0.5, 0.625, 1.0]);
    assert_eq!(rows[0], unit_row(2, 0));
    assert_eq!(rows[2], unit_row(2, 0));
    assert_eq!(rows[3], unit_row(2, 1));

    assert!(pwm(&weights, 3).is_err());
}

#[test]
fn output_is_always_a_pure_layout_in_index_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let n = rng.gen_range(0..=5u32);
        let q = rng.gen_range(1..=4usize);
        let rows_in: Vec<DVector<f64>> = (0..1usize << n)
            .map(|_| dyadic_simplex_row(&mut rng, q))
            .collect();
        let weights = DyadicWeights::new(n, rows_in).unwrap();
        let (rows, partition) = pwm(&weights, n).unwrap();
        assert_eq!(partition.num_samples(), 1 + q * (1 << n));
        assert_eq!(partition.level(), n);
        for (idx, row) in rows.iter().enumerate() {
            assert_eq!(row.iter().filter(|&&v| v == 1.0).count(), 1);
            assert_eq!(row.iter().filter(|&&v| v == 0.0).count(), q - 1);
            assert_eq!(row[idx % q], 1.0);
        }
    }
}

#[test]
fn frame_allocation_matches_the_weights_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..60 {
        let n = rng.gen_range(0..=5u32);
        let q = rng.gen_range(1..=4usize);
        let frames = 1usize << n;
        let w = 0.5f64.powi(n as i32);
        let rows_in: Vec<DVector<f64>> =
            (0..frames).map(|_| dyadic_simplex_row(&mut rng, q)).collect();
        let weights = DyadicWeights::new(n, rows_in.clone()).unwrap();
        let (_, partition) = pwm(&weights, n).unwrap();
        for k in 0..frames {
            assert_eq!(partition.samples()[k * q], k as f64 * w);
            for i in 0..q {
                let len = partition.delta(k * q + i);
                assert_eq!(
                    len,
                    rows_in[k][i] * w,
                    "frame {k}, mode {i} under N = {n}, q = {q}"
                );
            }
        }
    }
}
