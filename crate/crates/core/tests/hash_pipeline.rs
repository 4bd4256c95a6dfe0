use std::path::PathBuf;

use fibhash::approx::load_pseudogroup;
use fibhash::bench::haar_random_gate;
use fibhash::groups::GroupKind;
use fibhash::hash::{iterate_once, preprocess, HashConfig, Hasher, Mesh, ProductSet};
use fibhash::su2::{distance, named_gate, Gate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/pseudogroups")
}

fn short_config() -> HashConfig {
    HashConfig {
        iterations: vec![24],
        tail_quantile: None,
        pseudogroup_dir: data_dir(),
        ..HashConfig::default()
    }
}

#[test]
fn mesh_shape_and_identity_item() {
    let p = load_pseudogroup(data_dir().join("icosahedral-L24.txt")).unwrap();
    let g = GroupKind::Icosahedral.build().unwrap();
    let mesh = Mesh::build(&p, &g, 3).unwrap();
    assert_eq!(mesh.len(), 216_000);
    assert!(mesh.word(0).is_empty());
    assert_eq!(mesh.quats()[0].distance_to_identity(), 0.0);
    for k in [1, 777, 123_456, 215_999] {
        let idx = mesh.indices(k);
        assert_eq!(idx.len(), 4);
        assert_eq!(idx[3], g.closing_element(&idx[..3]));
        let d = distance(&mesh.word(k).evaluate(), &mesh.gate(k)).unwrap();
        assert!(d < 1e-10);
    }
    // four independent errors of typical size 0.018 add in quadrature
    let s0 = mesh.s0();
    assert!((s0 / 0.036 - 1.0).abs() < 0.3, "s0 = {s0}");
}

#[test]
fn preprocessor_with_one_factor_is_a_linear_scan() {
    let p = load_pseudogroup(data_dir().join("icosahedral-L8.txt")).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let t = haar_random_gate(&mut rng);
        let r = preprocess(&t, &p, 1).unwrap();
        let oracle = (0..p.len())
            .map(|i| distance(&p.word(i).evaluate(), &t).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((r.error - oracle).abs() < 1e-12);
    }
}

#[test]
fn stored_products_are_hit_exactly() {
    let p = load_pseudogroup(data_dir().join("icosahedral-L8.txt")).unwrap();
    let ps = ProductSet::build(&p, 3).unwrap();
    let t = ps.word(4321).evaluate();
    let r = preprocess(&t, &p, 3).unwrap();
    assert!(r.error < 1e-12);
}

#[test]
fn stages_are_monotone_and_errors_recompute() {
    let hasher = Hasher::new(&short_config()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let t = haar_random_gate(&mut rng);
        let r = hasher.hash(&t);
        let e = r.stage_errors();
        assert!(e.windows(2).all(|w| w[1] <= w[0]));
        let d = distance(&r.word.evaluate(), &t).unwrap();
        assert!((d - r.error).abs() < 1e-10);
        assert_eq!(r.unreduced_length(), 24 + 96);
    }
}

#[test]
fn iterate_once_matches_hasher() {
    let cfg = short_config();
    let hasher = Hasher::new(&cfg).unwrap();
    let p8 = load_pseudogroup(data_dir().join("icosahedral-L8.txt")).unwrap();
    let t = named_gate("H").unwrap();
    let pre = preprocess(&t, &p8, 3).unwrap();
    let one = iterate_once(&pre, &t, hasher.mesh(0));
    assert_eq!(one, hasher.hash(&t));
}

#[test]
fn identity_target_hashes_to_zero() {
    let hasher = Hasher::new(&short_config()).unwrap();
    let r = hasher.hash(&Gate::identity());
    assert_eq!(r.error, 0.0);
    assert!(r.word.is_empty());
}

#[test]
fn missing_pseudogroup_is_reported() {
    let cfg = HashConfig {
        iterations: vec![26],
        ..short_config()
    };
    assert!(Hasher::new(&cfg).is_err());
}

#[test]
fn key_value_block_round_trips_numbers() {
    let hasher = Hasher::new(&short_config()).unwrap();
    let r = hasher.hash(&named_gate("X").unwrap());
    let kv = r.to_key_values();
    let err: f64 = kv
        .lines()
        .find_map(|l| l.strip_prefix("error="))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(err, r.error);
    assert!(r.to_text().contains("preprocessor"));
}
