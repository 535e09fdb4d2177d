use practical_numbers::density::{rho_empirical, rho_exact, to_f64};
use practical_numbers::sieve::n_count;
use practical_web::{density_table, explore, ratio_curve};
use serde_json::{json, Value};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn explore_practical_and_not() {
    let v = parse(explore(150).unwrap());
    assert_eq!(v["factors"], json!([[2, 1], [3, 1], [5, 2]]));
    assert_eq!(v["practical"], json!(true));
    assert_eq!(v["f"], json!(372));
    assert_eq!(v["component"], json!(150));
    assert_eq!(v["cofactor"], json!(1));

    let v = parse(explore(10).unwrap());
    assert_eq!(v["practical"], json!(false));
    assert_eq!((v["f"].as_u64(), v["component"].as_u64()), (Some(3), Some(2)));
    let ratio = v["ratio"].as_f64().unwrap();
    assert!(ratio > 0.0 && ratio < 1.0);
}

#[test]
fn explore_tiny_n_has_no_threshold() {
    let v = parse(explore(2).unwrap());
    assert_eq!(v["threshold"], Value::Null);
    assert_eq!(v["f"], json!(3));
}

#[test]
fn ratio_curve_matches_counts() {
    let ys = [100, 10, 1000];
    let v = parse(ratio_curve(100_000, &ys).unwrap());
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), ys.len());
    for (row, &y) in rows.iter().zip(&ys) {
        assert_eq!(row["y"].as_u64(), Some(y));
        assert_eq!(row["count"].as_u64(), Some(n_count(100_000, y).unwrap()));
    }
}

#[test]
fn density_table_matches_core() {
    let v = parse(density_table(60, 20_000).unwrap());
    let rows = v.as_array().unwrap();
    let ms: Vec<u64> = rows.iter().map(|r| r["m"].as_u64().unwrap()).collect();
    assert_eq!(ms, [1, 3, 7, 12, 15, 28, 31, 39, 42, 56, 60]);
    for r in rows {
        let m = r["m"].as_u64().unwrap();
        let rho = rho_exact(m).unwrap();
        assert_eq!(r["rho_num"].as_str().unwrap(), rho.numer().to_string());
        assert_eq!(r["rho_den"].as_str().unwrap(), rho.denom().to_string());
        assert_eq!(r["rho_float"].as_f64().unwrap(), to_f64(&rho));
        assert_eq!(r["empirical"].as_f64().unwrap(), rho_empirical(m, 20_000).unwrap());
    }
    assert_eq!(rows[1]["rho_num"], json!("1"));
    assert_eq!(rows[1]["rho_den"], json!("6"));
}
