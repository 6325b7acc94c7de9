use std::process::Command;

use proptest::prelude::*;

fn run(args: &[String]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_monofock"))
        .args(args)
        .env_remove("MONOFOCK_CAP_N")
        .output()
        .unwrap();
    (out.status.code(), String::from_utf8(out.stdout).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn distribution_csv_is_a_symmetric_probability(n in 1usize..=9) {
        let (code, text) = run(&["distribution".into(), "--n".into(), n.to_string(), "--format".into(), "csv".into()]);
        prop_assert_eq!(code, Some(0));
        let rows: Vec<(f64, f64)> = text
            .lines()
            .skip(1)
            .map(|l| {
                let (a, w) = l.split_once(',').unwrap();
                (a.parse().unwrap(), w.parse().unwrap())
            })
            .collect();
        prop_assert_eq!(rows.len(), 1 << n);
        let mass: f64 = rows.iter().map(|r| r.1).sum();
        prop_assert!((mass - 1.0).abs() < 1e-8);
        for (x, y) in rows.iter().zip(rows.iter().rev()) {
            prop_assert_eq!(x.0, -y.0);
            prop_assert_eq!(x.1, y.1);
        }
    }

    #[test]
    fn norm_only_depends_on_size(ix in proptest::collection::btree_set(1u32..=6, 2..=3)) {
        let list: Vec<String> = ix.iter().map(u32::to_string).collect();
        let (code, text) = run(&["norm".into(), "--indices".into(), list.join(",")]);
        prop_assert_eq!(code, Some(0));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&v["equals_contiguous"], &serde_json::Value::Bool(true));
        let want = if ix.len() == 2 { 1.618033989 } else { 2.095293985 };
        prop_assert!((v["norm"].as_f64().unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn plot_output_is_deterministic(n in 1usize..=6, w in 200u32..900, h in 200u32..700) {
        let args: Vec<String> = vec!["plot".into(), "--n".into(), n.to_string(), "--width".into(), w.to_string(), "--height".into(), h.to_string()];
        let (c1, a) = run(&args);
        let (c2, b) = run(&args);
        prop_assert_eq!((c1, c2), (Some(0), Some(0)));
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.matches("<circle").count(), 1 << n);
    }
}
