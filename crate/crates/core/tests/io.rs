use std::path::Path;

use neugas::distributions::generate_dataset;
use neugas::estimation::{density_table, PhaseLabel};
use neugas::harness::SweepRow;
use neugas::io::{self, CloudFormat};
use neugas::{seed, Codebook, DatasetSpec, NoiseSpec, PointCloud, ShapeSpec};
use proptest::prelude::*;

const BUNNY_LIKE_PLY: &str = "ply
format ascii 1.0
comment exported by a mesh tool
element material 1
property float shininess
element vertex 4
property float x
property float y
property float z
property uchar red
element face 2
property list uchar int vertex_indices
end_header
0.5
0.0 0.0 0.0 255
1.0 0.0 0.0 0
0.0 2.0 0.0 7
0.0 0.0 -3.5 1
3 0 1 2
3 0 2 3
";

#[test]
fn ply_fixture_reads_only_vertex_positions() {
    let cloud = io::parse_cloud(BUNNY_LIKE_PLY, Path::new("fixture.ply"), Some(3)).unwrap();
    assert_eq!(cloud.len(), 4);
    assert_eq!(cloud.point(2), &[0.0, 2.0, 0.0]);
    assert_eq!(cloud.point(3), &[0.0, 0.0, -3.5]);
}

#[test]
fn malformed_files_name_the_line() {
    let err = io::parse_cloud("1 2\n3 4\n5\n", Path::new("bad.xyz"), None).unwrap_err();
    assert!(matches!(err, neugas::Error::Parse { line: 3, .. }), "{err}");
    let err = io::parse_cloud("# only a comment\n", Path::new("empty.xyz"), None).unwrap_err();
    assert!(matches!(err, neugas::Error::Parse { .. }));
    let err = io::parse_cloud("1 nan\n", Path::new("nan.xyz"), None).unwrap_err();
    assert!(matches!(err, neugas::Error::Parse { line: 1, .. }));
    let truncated = BUNNY_LIKE_PLY
        .lines()
        .take(16)
        .collect::<Vec<_>>()
        .join("\n");
    assert!(io::parse_cloud(&truncated, Path::new("short.ply"), None).is_err());
    assert!(io::parse_cloud("1 2 3\n", Path::new("a.xyz"), Some(2)).is_err());
}

#[test]
fn generated_cloud_round_trips_in_both_formats() {
    let cloud = generate_dataset(&DatasetSpec {
        shape: ShapeSpec::Sphere,
        noise: NoiseSpec::Gaussian { sigma: 0.25 },
        n_points: 2000,
        seed: 11,
    })
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    for (name, format) in [("c.xyz", CloudFormat::Xyz), ("c.ply", CloudFormat::Ply)] {
        let path = dir.path().join(name);
        io::write_cloud(&cloud, &path, format).unwrap();
        let back = io::read_cloud(&path, Some(3)).unwrap();
        assert_eq!(back.len(), cloud.len());
        for (a, b) in back.as_flat().iter().zip(cloud.as_flat()) {
            assert!((a - b).abs() <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn xyz_text_round_trip_is_exact(
        dim in 1usize..5,
        raw in prop::collection::vec(-1e12f64..1e12, 1..60),
    ) {
        let n = raw.len() / dim;
        prop_assume!(n > 0);
        let cloud = PointCloud::new(dim, raw[..n * dim].to_vec()).unwrap();
        let mut buf = Vec::new();
        io::write_cloud_to(&mut buf, &cloud, CloudFormat::Xyz, &[]).unwrap();
        let back = io::parse_cloud(std::str::from_utf8(&buf).unwrap(), Path::new("mem"), Some(dim)).unwrap();
        prop_assert_eq!(back, cloud);
    }
}

#[test]
fn density_table_csv_has_fixed_columns() {
    let data = generate_dataset(&DatasetSpec {
        shape: ShapeSpec::Disk,
        noise: NoiseSpec::None,
        n_points: 3000,
        seed: 2,
    })
    .unwrap();
    let cb = Codebook::sample_from(&data, 40, &mut seed::rng(1)).unwrap();
    let table = density_table(&cb, &data).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    io::write_density_table(&table, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "unit_index,x,y,p_hat,rho_hat,log10_p,log10_rho"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 40);
    for (row, expected) in rows.iter().zip(&table.rows) {
        assert_eq!(row[0] as usize, expected.unit);
        assert_eq!(row[3], expected.p_hat);
        assert_eq!(row[4], expected.rho_hat);
        assert!((row[5] - expected.p_hat.log10()).abs() < 1e-12);
    }
}

#[test]
fn summary_round_trips_with_missing_values() {
    let rows = vec![
        SweepRow {
            k: 32,
            lambda: 1.5,
            repetition: 0,
            seed: u64::MAX,
            entropy: Some(3.25),
            proximity: None,
            hausdorff: Some(0.1),
            alpha: None,
            phase: Some(PhaseLabel::ShellPlusCore),
            status: "ok".into(),
        },
        SweepRow {
            k: 64,
            lambda: 0.0,
            repetition: 2,
            seed: 7,
            entropy: None,
            proximity: Some(1e-300),
            hausdorff: None,
            alpha: Some(0.5132),
            phase: None,
            status: "failed:train".into(),
        },
    ];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/summary.csv");
    io::write_summary(&rows, &path).unwrap();
    assert_eq!(io::read_summary(&path).unwrap(), rows);
    let header = std::fs::read_to_string(&path).unwrap();
    assert!(header.starts_with(io::SUMMARY_HEADER));
}
