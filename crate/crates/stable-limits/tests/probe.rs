use stable_limits::symmetric_pdf;

#[test]
fn probe_pdf() {
    for alpha in [0.30f64, 0.33, 0.35, 0.36, 0.40, 0.45] {
        let mut bad: Vec<f64> = Vec::new();
        let mut z = 0.001f64;
        while z <= 40.0 {
            if symmetric_pdf(alpha, 1.0, z).is_err() {
                bad.push(z);
            }
            z *= 1.15;
        }
        match (bad.first(), bad.last()) {
            (Some(lo), Some(hi)) => println!("alpha={alpha}: {} failures in [{lo:.4}, {hi:.4}]", bad.len()),
            _ => println!("alpha={alpha}: clean"),
        }
    }
}
