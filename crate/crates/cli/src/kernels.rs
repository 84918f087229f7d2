//! `heisenlab kernels`: CSV tables of kernel values along a ray.

use std::fs;
use std::path::Path;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use heisenlab::heisenberg::{heisenberg_kernel_eval, HeisenbergKernel};
use heisenlab::laguerre::{kernel_radial, KernelKind, KernelValue};
use heisenlab::report::Table;
use heisenlab::C64;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// p_t^λ on ℂ¹
    Heat,
    /// K^s_{λ,d} on ℂ¹
    Bessel,
    /// K_λ on ℂ¹
    Fundamental,
    /// p_t(w, s) on H¹
    HeisenbergHeat,
    /// K_γ^λ on ℂ¹ (or K_γ(w, s) on H¹ without --lambda)
    BesselGamma,
    /// K_γ^0 on ℂ¹
    EuclidLimit,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// λ; optional for bessel-gamma, where omitting it gives the full kernel on H¹
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Order s of the Bessel kernel
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    #[arg(long, default_value_t = 0.0)]
    d: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Central variable for kernels on H¹
    #[arg(long = "time", default_value_t = 0.0)]
    time: f64,
    /// Comma-separated radii |z|
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.5, 1.0, 2.0, 4.0])]
    radii: Vec<f64>,
}

pub fn run(a: &KernelArgs, out: &Path) -> Result<bool, super::Usage> {
    let usage = |e: heisenlab::Error| super::Usage(e.to_string());
    let lambda = a.lambda.unwrap_or(1.0);
    let (label, params) = match a.kind {
        Kind::Heat => ("heat", format!("t={}", a.t)),
        Kind::Bessel => ("bessel", format!("s={};d={}", a.s, a.d)),
        Kind::Fundamental => ("fundamental", String::new()),
        Kind::HeisenbergHeat => ("heisenberg_heat", format!("t={};time={}", a.t, a.time)),
        Kind::BesselGamma => ("bessel_gamma", format!("gamma={};time={}", a.gamma, a.time)),
        Kind::EuclidLimit => ("euclid_limit", format!("gamma={}", a.gamma)),
    };
    let lambda_cell: Value = match a.kind {
        Kind::HeisenbergHeat | Kind::EuclidLimit => Value::Null,
        Kind::BesselGamma => a.lambda.map(|l| json!(l)).unwrap_or(Value::Null),
        _ => json!(lambda),
    };
    let mut table = Table::new(&["kind", "lambda", "params", "|z|", "value", "rel_err_est"]);
    let mut converged = true;
    for &r in &a.radii {
        let w = C64::new(r, 0.0);
        let v: KernelValue = match a.kind {
            Kind::Heat => kernel_radial(KernelKind::Heat { t: a.t }, 1, lambda, r * r),
            Kind::Bessel => kernel_radial(KernelKind::Bessel { s: a.s, d: a.d }, 1, lambda, r * r),
            Kind::Fundamental => kernel_radial(KernelKind::Fundamental, 1, lambda, r * r),
            Kind::HeisenbergHeat => heisenberg_kernel_eval(HeisenbergKernel::Heat { t: a.t }, w, a.time),
            Kind::BesselGamma => heisenberg_kernel_eval(HeisenbergKernel::BesselGamma { gamma: a.gamma, lambda: a.lambda }, w, a.time),
            Kind::EuclidLimit => heisenberg_kernel_eval(HeisenbergKernel::EuclidLimit { gamma: a.gamma }, w, 0.0),
        }
        .map_err(usage)?;
        converged &= v.converged;
        table.push(vec![json!(label), lambda_cell.clone(), json!(params), json!(r), json!(v.value), json!(v.rel_err_est)]);
    }
    let csv = table.to_csv();
    print!("{csv}");
    fs::create_dir_all(out).map_err(|e| super::Usage(format!("cannot create {}: {e}", out.display())))?;
    fs::write(out.join(format!("kernels.{label}.csv")), &csv).map_err(|e| super::Usage(e.to_string()))?;
    if !converged {
        eprintln!("warning: some quadratures did not reach their target accuracy");
    }
    Ok(converged)
}
