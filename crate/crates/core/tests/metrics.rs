mod common;

use common::random_pose;
use motion_graph::kinematics::{Pose, Skeleton, Vec3};
use motion_graph::metrics::{beat_consistency, diversity, kinematic_beats, BeatTrack};
use motion_graph::synth::{humanoid, GestureStyle};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Straight from the definition, with no early exits.
fn reference_bc(kinematic: &[f64], audio: &[f64], sigma: f64) -> f64 {
    let terms: Vec<f64> = audio
        .iter()
        .map(|b| {
            let d = kinematic.iter().map(|k| (b - k).abs()).fold(f64::INFINITY, f64::min);
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    terms.iter().sum::<f64>() / terms.len() as f64
}

fn increasing(v: Vec<f64>) -> Vec<f64> {
    let mut acc = 0.0;
    v.into_iter().map(|d| {
        acc += d;
        acc
    }).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bc_matches_reference_and_is_bounded(
        kin in proptest::collection::vec(0.0f64..10.0, 1..12),
        gaps in proptest::collection::vec(0.01f64..2.0, 1..12),
        sigma in 0.01f64..1.0,
    ) {
        let audio = increasing(gaps);
        let bc = beat_consistency(&kin, &BeatTrack::new(audio.clone()).unwrap(), sigma).unwrap();
        prop_assert!((bc - reference_bc(&kin, &audio, sigma)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&bc));
    }

    #[test]
    fn far_away_kinematic_beats_change_nothing(
        kin in proptest::collection::vec(0.0f64..10.0, 1..8),
        gaps in proptest::collection::vec(0.05f64..1.0, 1..8),
    ) {
        let sigma = 0.1;
        let audio = BeatTrack::new(increasing(gaps)).unwrap();
        let base = beat_consistency(&kin, &audio, sigma).unwrap();
        // more than 6σ past every audio beat: never the nearest, or one with weight < e^-18
        let last = *audio.times().last().unwrap();
        let mut more = kin.clone();
        more.push(last.max(10.0) + 0.7);
        let with = beat_consistency(&more, &audio, sigma).unwrap();
        prop_assert!((with - base).abs() < 1e-6);
    }

    #[test]
    fn bc_is_order_free_in_kinematic_beats(kin in proptest::collection::vec(0.0f64..5.0, 1..10), shift in 0usize..10) {
        let audio = BeatTrack::new(vec![0.5, 1.25, 3.0]).unwrap();
        let mut rotated = kin.clone();
        let n = rotated.len();
        rotated.rotate_left(shift % n);
        prop_assert_eq!(
            beat_consistency(&kin, &audio, 0.1).unwrap(),
            beat_consistency(&rotated, &audio, 0.1).unwrap()
        );
    }

    #[test]
    fn diversity_is_permutation_invariant(seed in any::<u64>(), count in 2usize..6, frames in 1usize..6, shift in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let skel = humanoid::<f64>();
        let motions: Vec<Vec<Pose<f64>>> =
            (0..count).map(|_| (0..frames).map(|_| random_pose(&mut rng, skel.joint_count())).collect()).collect();
        let base = diversity(&motions, &skel).unwrap();
        let mut perm = motions.clone();
        perm.rotate_left(shift % count);
        perm.reverse();
        prop_assert!((diversity(&perm, &skel).unwrap() - base).abs() < 1e-12);
        prop_assert!(base > 0.0);
    }

    #[test]
    fn diversity_ignores_quaternion_sign(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let skel = humanoid::<f64>();
        let a: Vec<Pose<f64>> = (0..3).map(|_| random_pose(&mut rng, skel.joint_count())).collect();
        let flipped: Vec<Pose<f64>> = a
            .iter()
            .map(|p| Pose { rotations: p.rotations.iter().map(|q| -*q).collect(), root_translation: p.root_translation })
            .collect();
        prop_assert!(diversity(&[a, flipped], &skel).unwrap() < 1e-12);
    }
}

#[test]
fn bc_fixture_values() {
    let audio = BeatTrack::<f64>::new(vec![1.0, 2.0, 3.0]).unwrap();
    assert!((beat_consistency(&[1.0, 2.0, 3.0], &audio, 0.1).unwrap() - 1.0).abs() < 1e-6);
    assert!(beat_consistency(&[10.0], &audio, 0.1).unwrap().abs() < 1e-6);
    assert_eq!(beat_consistency(&[], &audio, 0.1).unwrap(), 0.0);
    // every audio beat exactly one σ from its nearest kinematic beat
    let bc = beat_consistency(&[1.1, 1.9, 3.1], &audio, 0.1).unwrap();
    assert!((bc - (-0.5f64).exp()).abs() < 1e-6);
}

#[test]
fn diversity_of_two_motions_is_their_distance() {
    let skel = Skeleton::chain(2, Vec3::new(1.0, 0.0, 0.0), vec![1]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a: Vec<Pose<f64>> = (0..4).map(|_| random_pose(&mut rng, 2)).collect();
    let b: Vec<Pose<f64>> = (0..4).map(|_| random_pose(&mut rng, 2)).collect();
    let want = a
        .iter()
        .zip(&b)
        .flat_map(|(p, q)| {
            let (x, y) = (p.rotations[1].canonical().to_array(), q.rotations[1].canonical().to_array());
            (0..4).map(move |i| (x[i] - y[i]).powi(2))
        })
        .sum::<f64>()
        .sqrt();
    assert!((diversity(&[a.clone(), b], &skel).unwrap() - want).abs() < 1e-12);
    assert!(diversity(&[a.clone(), a[..3].to_vec()], &skel).is_err());
    assert!(diversity(&[a], &skel).is_err());
}

#[test]
fn reversed_motion_has_mirrored_beats() {
    let skel = humanoid::<f64>();
    let fps = 30.0;
    let mut found = 0;
    for seed in 0..5 {
        let motion: Vec<Pose<f64>> = GestureStyle::random(skel.joint_count(), seed).sample(0.0, 150, fps);
        let forward = kinematic_beats(&motion, &skel, fps, 0.05).unwrap();
        let mut rev = motion.clone();
        rev.reverse();
        let mut backward: Vec<f64> =
            kinematic_beats(&rev, &skel, fps, 0.05).unwrap().iter().map(|t| 149.0 / fps - t).collect();
        backward.reverse();
        assert_eq!(forward.len(), backward.len(), "seed {seed}");
        for (a, b) in forward.iter().zip(&backward) {
            // a plateau of even length rounds its midpoint down either way
            assert!((a - b).abs() <= 1.0 / fps + 1e-12, "seed {seed}: {a} vs {b}");
        }
        for b in &forward {
            assert!((0.0..=149.0 / fps).contains(b));
        }
        found += forward.len();
    }
    assert!(found > 0);
}
