//! Acceptance suite. One test per criterion; each prints a PASS line (run
//! with `cargo test --test acceptance -- --nocapture` to see them). Oracles
//! here are written independently of the library paths they check.

use std::path::Path;
use std::time::Instant;

use fairlens::analysis::dataset_entry;
use fairlens::core::{
    choose_region, face_keep_original_augment, fairness_diversity,
    fine_grained_saliency, iias, iss_cross, iss_intra, l2_normalize, partition_regions,
    AugmentPart, FeatureVector, GrayImage, Group, GroupedFeatures, PipelineConfig,
    PlacementStrategy, RandAugPolicy, RasterImage, Rect, SaliencyConfig, Weights,
};
use fairlens::dataset::{scan_dataset, undersample_balance, Manifest, ManifestRecord};
use fairlens::features::{embed_manifest, EmbeddingSpec};
use fairlens::imgio::save_image;
use fairlens::report::{write_report, AuditReport, ReportFormat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---- shared generators ----------------------------------------------------

fn unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm: f64 = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return raw.iter().map(|v| v / norm).collect();
        }
    }
}

fn random_grouped(
    rng: &mut ChaCha8Rng,
    max_groups: usize,
    max_size: usize,
    max_dim: usize,
) -> Vec<Vec<Vec<f64>>> {
    let k = rng.gen_range(1..=max_groups);
    let dim = rng.gen_range(2..=max_dim);
    (0..k)
        .map(|_| {
            let n = rng.gen_range(1..=max_size);
            (0..n).map(|_| unit_vector(dim, rng)).collect()
        })
        .collect()
}

fn to_grouped_features(groups: &[Vec<Vec<f64>>]) -> GroupedFeatures {
    let groups: Vec<Group> = groups
        .iter()
        .enumerate()
        .map(|(i, vs)| {
            Group::new(
                format!("g{i}"),
                vs.iter().map(|v| l2_normalize(v).unwrap()).collect(),
            )
        })
        .collect();
    GroupedFeatures::new(groups).unwrap()
}

fn noise_image(w: usize, h: usize, seed: u64) -> RasterImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<u8> = (0..w * h * 3).map(|_| rng.gen()).collect();
    RasterImage::from_raw(w, h, data).unwrap()
}

// ---- independent metric oracles -------------------------------------------

fn naive_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn naive_d_within(vectors: &[Vec<f64>]) -> f64 {
    let n = vectors.len();
    if n < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    for j in 0..n {
        for k in j + 1..n {
            sum += naive_distance(&vectors[j], &vectors[k]);
        }
    }
    sum / (n * (n - 1)) as f64
}

fn naive_d_inter(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let mut sum = 0.0;
    for x in a {
        for y in b {
            sum += naive_distance(x, y);
        }
    }
    sum / (a.len() * b.len()) as f64
}

fn naive_combined(groups: &[Vec<Vec<f64>>], alpha: f64, beta: f64) -> f64 {
    let n: usize = groups.iter().map(Vec::len).sum();
    if n <= 1 {
        return 0.0;
    }
    let mut within = 0.0;
    for g in groups {
        within += g.len() as f64 * naive_d_within(g);
    }
    let mut inter = 0.0;
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            inter += (groups[i].len() * groups[j].len()) as f64
                * naive_d_inter(&groups[i], &groups[j]);
        }
    }
    alpha * within / n as f64 + beta * inter / (n as f64 * (n as f64 - 1.0))
}

// ---- criteria ---------------------------------------------------------------

#[test]
fn acceptance_01_metric_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE01);
    let weights = Weights::new(0.5, 0.5).unwrap();
    for _ in 0..200 {
        let raw = random_grouped(&mut rng, 4, 8, 16);
        let gf = to_grouped_features(&raw);
        for (group, naive) in gf.groups().iter().zip(&raw) {
            let got = fairlens::core::d_within(group).unwrap();
            assert!((got - naive_d_within(naive)).abs() <= 1e-9);
        }
        for i in 0..raw.len() {
            for j in i + 1..raw.len() {
                let got = fairlens::core::d_inter(&gf.groups()[i], &gf.groups()[j]).unwrap();
                assert!((got - naive_d_inter(&raw[i], &raw[j])).abs() <= 1e-9);
            }
        }
        let got = fairness_diversity(&gf, weights).unwrap();
        assert!((got - naive_combined(&raw, 0.5, 0.5)).abs() <= 1e-9);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("ACCEPTANCE 01 metric-oracle equivalence: PASS (200 instances, {elapsed:?})");
}

#[test]
fn acceptance_02_combined_metric_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE02);
    let tight = Weights::new(0.49, 0.49).unwrap();
    let full = Weights::new(0.5, 0.5).unwrap();
    let mut violations = 0usize;
    for _ in 0..10_000 {
        let gf = to_grouped_features(&random_grouped(&mut rng, 4, 5, 8));
        let m_tight = fairness_diversity(&gf, tight).unwrap();
        let m_full = fairness_diversity(&gf, full).unwrap();
        if !(0.0..=0.98).contains(&m_tight) || !(0.0..=1.0).contains(&m_full) {
            violations += 1;
        }
    }
    assert_eq!(violations, 0);
    println!("ACCEPTANCE 02 combined-metric bound: PASS (10000 instances, 0 violations)");
}

#[test]
fn acceptance_03_worked_value_library_and_cli() {
    let e = |axis: usize| {
        let mut raw = vec![0.0; 4];
        raw[axis] = 1.0;
        l2_normalize(&raw).unwrap()
    };
    let gf = GroupedFeatures::new(vec![
        Group::new("a", vec![e(0), e(1)]),
        Group::new("b", vec![e(0)]),
    ])
    .unwrap();
    let expected = std::f64::consts::SQRT_2 / 4.0;
    let m = fairness_diversity(&gf, Weights::new(0.5, 0.5).unwrap()).unwrap();
    assert!((m - expected).abs() <= 1e-9, "library M = {m}");

    let dir = tempfile::tempdir().unwrap();
    let features = dir.path().join("features.txt");
    std::fs::write(&features, "#dim=4\na1,a,1,0,0,0\na2,a,0,1,0,0\nb1,b,1,0,0,0\n").unwrap();
    let out = dir.path().join("report.json");
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_fairlens"))
        .args(["metrics", "--alpha", "0.5", "--beta", "0.5", "--format", "json", "--in"])
        .arg(&features)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let cli_m = doc["entries"][0]["m"].as_f64().unwrap();
    assert!((cli_m - expected).abs() <= 1e-6, "CLI M = {cli_m}");
    println!("ACCEPTANCE 03 worked value sqrt(2)/4: PASS (library {m:.9}, cli {cli_m:.9})");
}

#[test]
fn acceptance_04_saliency_matches_sliding_window_oracle() {
    // Direct O(W*H*r^2) recomputation, sharing only the documented contract.
    fn oracle(gray: &GrayImage, radii: &[u32]) -> Vec<f64> {
        let (w, h) = (gray.width(), gray.height());
        let cap = (w.min(h) / 2).max(1);
        let mut rs: Vec<usize> =
            radii.iter().map(|&r| (r.max(1) as usize).min(cap)).collect();
        rs.sort_unstable();
        rs.dedup();
        let mut raw = vec![0.0f64; w * h];
        for &r in &rs {
            for y in 0..h {
                for x in 0..w {
                    let mut sum = 0.0;
                    let mut count = 0.0;
                    for yy in y.saturating_sub(r)..(y + r + 1).min(h) {
                        for xx in x.saturating_sub(r)..(x + r + 1).min(w) {
                            sum += gray.get(xx, yy) as f64;
                            count += 1.0;
                        }
                    }
                    let surround = sum / count;
                    let center = gray.get(x, y) as f64;
                    raw[y * w + x] += (center - surround).abs();
                }
            }
        }
        let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            raw.iter().map(|v| (v - lo) / (hi - lo)).collect()
        } else {
            vec![0.0; raw.len()]
        }
    }

    let radii = SaliencyConfig::default().radii;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<f32> = (0..16 * 16).map(|_| rng.gen_range(0..=256) as f32 / 256.0).collect();
        let gray = GrayImage::from_raw(16, 16, data).unwrap();
        let map = fine_grained_saliency(&gray, &radii).unwrap();
        let expect = oracle(&gray, &radii);
        for (i, &got) in map.as_slice().iter().enumerate() {
            assert!((got as f64 - expect[i]).abs() <= 1e-6, "seed {seed} pixel {i}");
        }
    }

    let flat = GrayImage::from_raw(16, 16, vec![0.375; 256]).unwrap();
    let map = fine_grained_saliency(&flat, &radii).unwrap();
    assert!(map.as_slice().iter().all(|&v| v == 0.0));
    println!("ACCEPTANCE 04 saliency sliding-window oracle: PASS (50 images + constant)");
}

#[test]
fn acceptance_05_geometry_tiling_exhaustive() {
    let (w, h) = (12usize, 12usize);
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE05);
    let mut boxes = 0usize;
    for x0 in 0..w {
        for x1 in x0 + 1..=w {
            for y0 in 0..h {
                for y1 in y0 + 1..=h {
                    let boxr = Rect::new(x0, y0, x1, y1);
                    let partition = partition_regions(w, h, boxr).unwrap();
                    for py in 0..h {
                        for px in 0..w {
                            let mut hits = usize::from(boxr.contains(px, py));
                            hits += partition.cells.iter().filter(|c| c.contains(px, py)).count();
                            assert_eq!(hits, 1, "box {boxr:?} pixel ({px},{py})");
                        }
                    }

                    // Exhaustive area comparison for the min/max strategies.
                    let areas: Vec<(usize, usize)> = partition
                        .cells
                        .iter()
                        .enumerate()
                        .map(|(i, c)| (i, c.area()))
                        .filter(|(_, a)| *a > 0)
                        .collect();
                    let min = choose_region(&partition, PlacementStrategy::MinArea, &mut rng);
                    let max = choose_region(&partition, PlacementStrategy::MaxArea, &mut rng);
                    if areas.is_empty() {
                        assert_eq!(min, None);
                        assert_eq!(max, None);
                    } else {
                        let best_min =
                            areas.iter().min_by_key(|(i, a)| (*a, *i)).unwrap();
                        let best_max = areas
                            .iter()
                            .max_by_key(|(i, a)| (*a, std::cmp::Reverse(*i)))
                            .unwrap();
                        assert_eq!(min.unwrap(), partition.cells[best_min.0]);
                        assert_eq!(max.unwrap(), partition.cells[best_max.0]);
                    }
                    boxes += 1;
                }
            }
        }
    }
    println!("ACCEPTANCE 05 exhaustive 12x12 tiling + min/max selection: PASS ({boxes} boxes)");
}

#[test]
fn acceptance_06_non_salient_only_preserves_outside_pixels() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w, h) = (rng.gen_range(8usize..32), rng.gen_range(8usize..32));
        let img = noise_image(w, h, seed.wrapping_mul(31).wrapping_add(7));
        let cfg = PipelineConfig {
            placement: PlacementStrategy::RandomArea,
            part: AugmentPart::NonSalientOnly,
            policy: RandAugPolicy::new(0, 0),
            saliency: SaliencyConfig::default(),
            master_seed: 0,
        };
        let out = face_keep_original_augment(&img, &cfg, &mut rng).unwrap();
        let cell = match out.cell {
            Some(cell) => cell,
            None => continue, // degenerate full-image box: nothing to check
        };
        for y in 0..h {
            for x in 0..w {
                if !cell.contains(x, y) {
                    assert_eq!(out.image.pixel(x, y), img.pixel(x, y), "seed {seed} ({x},{y})");
                }
            }
        }
    }
    println!("ACCEPTANCE 06 non-salient-only preservation at n_ops=0: PASS (100 images)");
}

#[test]
fn acceptance_07_augment_is_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("corpus");
    for group in ["female", "male"] {
        std::fs::create_dir_all(tree.join(group)).unwrap();
        for i in 0..25 {
            let img = noise_image(28, 22, i + u64::from(group == "male") * 1000);
            save_image(&img, &tree.join(group).join(format!("img{i:02}.png"))).unwrap();
        }
    }
    // Same command and destination, only --workers differs: every output
    // byte must match. Snapshot the first run, rerun, compare.
    let out = dir.path().join("augmented");
    let run = |workers: &str| {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_fairlens"))
            .args(["augment", "--seed", "17", "--workers", workers, "--in"])
            .arg(&tree)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    };
    let snapshot = |out: &Path| -> Vec<(std::path::PathBuf, Vec<u8>)> {
        let mut files: Vec<_> = walkdir::WalkDir::new(out)
            .into_iter()
            .map(|e| e.unwrap())
            .filter(|e| e.file_type().is_file())
            .map(|e| (e.path().to_path_buf(), std::fs::read(e.path()).unwrap()))
            .collect();
        files.sort();
        files
    };
    run("1");
    let first = snapshot(&out);
    std::fs::remove_dir_all(&out).unwrap();
    run("4");
    let second = snapshot(&out);

    assert_eq!(first.len(), 51); // 50 images + manifest.jsonl
    assert_eq!(first, second, "outputs differ across worker counts");
    println!("ACCEPTANCE 07 worker-count determinism: PASS (50 images, workers 1 vs 4)");
}

#[test]
fn acceptance_08_iss_iias_ranges_and_symmetries() {
    let e = |axis: usize, dim: usize, sign: f64| {
        let mut raw = vec![0.0; dim];
        raw[axis] = sign;
        l2_normalize(&raw).unwrap()
    };

    // Exact endpoint values.
    let same = vec![e(0, 4, 1.0); 5];
    assert_eq!(iss_intra(&same).unwrap(), 0.0);
    assert_eq!(iss_cross(&same, &same).unwrap(), 0.0);
    let antipodal = [e(0, 4, 1.0), e(0, 4, -1.0)];
    assert_eq!(iss_intra(&antipodal).unwrap(), 2.0);
    assert_eq!(iss_cross(&antipodal[..1], &antipodal[1..]).unwrap(), 2.0);

    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE08);
    for _ in 0..500 {
        let dim = rng.gen_range(2usize..12);
        let a: Vec<FeatureVector> =
            (0..rng.gen_range(2..8)).map(|_| l2_normalize(&unit_vector(dim, &mut rng)).unwrap()).collect();
        let b: Vec<FeatureVector> =
            (0..rng.gen_range(1..8)).map(|_| l2_normalize(&unit_vector(dim, &mut rng)).unwrap()).collect();
        let c: Vec<FeatureVector> =
            (0..rng.gen_range(1..8)).map(|_| l2_normalize(&unit_vector(dim, &mut rng)).unwrap()).collect();
        assert!((0.0..=2.0).contains(&iss_intra(&a).unwrap()));
        assert!((0.0..=2.0).contains(&iss_cross(&a, &b).unwrap()));

        let v = iias(&a, &b, &c).unwrap();
        assert!((-2.0..=2.0).contains(&v));
        let swapped = iias(&a, &c, &b).unwrap();
        assert!((v + swapped).abs() <= 1e-12, "antisymmetry violated: {v} vs {swapped}");
        assert_eq!(iias(&a, &b, &b).unwrap(), 0.0);
    }
    println!("ACCEPTANCE 08 ISS/IIAS ranges and symmetries: PASS (500 random draws + endpoints)");
}

#[test]
fn acceptance_09_undersampling_balances_to_minimum() {
    let records: Vec<ManifestRecord> = [("a", 100), ("b", 37), ("c", 4)]
        .iter()
        .flat_map(|(group, count)| {
            (0..*count).map(move |i| ManifestRecord {
                path: format!("{group}/img{i:03}.png").into(),
                group: group.to_string(),
                split: None,
            })
        })
        .collect();
    let manifest = Manifest { name: "synthetic".into(), records };

    let balanced = undersample_balance(&manifest, 21);
    let sizes = balanced.group_sizes();
    assert_eq!(sizes["a"], 4);
    assert_eq!(sizes["b"], 4);
    assert_eq!(sizes["c"], 4);

    let again = undersample_balance(&manifest, 21);
    assert_eq!(balanced, again, "same seed must reproduce the same selection");
    let other = undersample_balance(&manifest, 22);
    assert_ne!(balanced, other, "different seeds should differ on 100-to-4");
    println!("ACCEPTANCE 09 undersampling (100,37,4) -> (4,4,4): PASS (seeded, reproducible)");
}

#[test]
fn acceptance_10_audit_throughput() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("corpus");
    for group in ["female", "male"] {
        std::fs::create_dir_all(tree.join(group)).unwrap();
    }
    for i in 0..200u64 {
        let group = if i % 2 == 0 { "female" } else { "male" };
        let img = noise_image(128, 128, i);
        save_image(&img, &tree.join(group).join(format!("img{i:03}.png"))).unwrap();
    }

    // Full audit chain on a single worker thread.
    let start = Instant::now();
    let manifest = scan_dataset(&tree).unwrap();
    let spec = EmbeddingSpec::SaliencyWeighted { bins: 16, saliency: SaliencyConfig::default() };
    let set = embed_manifest(&manifest, &spec, 1).unwrap();
    let entry = dataset_entry(&set, Weights::default()).unwrap();
    let report = AuditReport::new(vec![entry]);
    write_report(&report, &dir.path().join("report.csv"), ReportFormat::Csv).unwrap();
    let elapsed = start.elapsed();

    assert!(elapsed.as_secs_f64() < 30.0, "audit took {elapsed:?}");
    assert!(report.entries[0].m.is_some());
    assert!(report.entries[0].iss_intra.is_some());
    assert!(report.entries[0].iss_cross.is_some());
    println!("ACCEPTANCE 10 audit throughput (200 x 128x128, 1 worker): PASS ({elapsed:?})");
}
