//! The abstract Green identity, checked on randomized vectors for all three
//! geometries — and shown to fail when the Dirichlet trace is corrupted.
//!
//! Every model builder arranges its trace maps and quadrature weights so that
//!
//! ```text
//! (T f, P g)_H - (P f, T g)_H = (G1 f, G0 g)_G - (G0 f, G1 g)_G
//! ```
//!
//! holds to rounding for *all* vectors in the discrete domain, where T is the
//! operator expression, P the interior projection, G0 the conormal trace, G1
//! the Dirichlet trace, and both inner products carry quadrature weights.
//! This exactness is what makes every Krein and trace identity downstream
//! hold to machine precision rather than up to discretization error.
//!
//! Run with `cargo run --example green_identity`.

use weyltrace::models::{Coeff, ModelConfig};

fn main() -> weyltrace::Result<()> {
    let models = [
        (
            "interval, variable coefficients",
            ModelConfig::Sl1d {
                n: 64,
                length: 2.0,
                // smooth positive diffusion sampled on the 64 cell faces
                a: Coeff::Samples((0..64).map(|i| 1.0 + 0.5 * (i as f64 / 64.0).sin()).collect()),
                a0: Coeff::Const(0.25),
            },
        ),
        (
            "rectangle 12x9",
            ModelConfig::Rect2d {
                nx: 12,
                ny: 9,
                lx: 1.0,
                ly: 0.75,
                a11: Coeff::Const(1.0),
                a22: Coeff::Const(2.5),
                a0: Coeff::Const(0.0),
            },
        ),
        (
            "disk, 24 radial cells, modes |l| <= 8",
            ModelConfig::DiskModes {
                n_r: 24,
                mode_max: 8,
                radius: 1.0,
            },
        ),
    ];

    println!("randomized Green-identity residuals (64 vector pairs each):\n");
    for (name, cfg) in &models {
        let instance = cfg.build()?;
        let residual = instance.max_green_residual(64, 2024);
        println!("  {name:<38} max residual {residual:.3e}");
        assert!(
            residual < 1e-12,
            "Green identity violated on {name}: {residual:.3e}"
        );
    }

    // Corrupt one trace map and watch the identity break.  This is the same
    // fault the `gamma1_scale` config knob injects.
    println!("\nnow scaling the Dirichlet trace of the interval model by 1.001:");
    let instance = models[0].1.build()?;
    let mut broken = match instance {
        weyltrace::models::ModelInstance::Dense(tr) => tr,
        _ => unreachable!("the interval is dense"),
    };
    broken.scale_dirichlet_trace(1.001);
    let report = broken.check_green_identity(64, 1e-12, 2024);
    println!(
        "  max residual {:.3e} -- identity {}",
        report.max_residual,
        if report.pass { "holds" } else { "broken, as expected" }
    );
    assert!(!report.pass);

    println!("\nGreen identity: exact on faithful models, detectably broken on faults");
    Ok(())
}
