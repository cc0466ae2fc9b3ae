use serde::Serialize;

use qwsearch::{groverian_entanglement, NodeState64, ProductSearch};

use crate::error::Result;
use crate::families::Family;
use crate::output::format_float;

#[derive(Debug, Clone, Serialize)]
pub struct MeasuresReport {
    pub state: String,
    pub n: usize,
    pub f_c: f64,
    #[serde(rename = "E_g")]
    pub e_g: f64,
    pub e_g_converged: bool,
    pub restarts: usize,
    #[serde(rename = "C_f")]
    pub c_f: f64,
}

pub fn measure_state(n: usize, family: &Family, search: &ProductSearch) -> Result<MeasuresReport> {
    let state: NodeState64 = family.build_pure(n, search.seed)?;
    let r = groverian_entanglement(&state, search)?;
    Ok(MeasuresReport {
        state: family.to_string(),
        n,
        f_c: r.f_c,
        e_g: r.e_g.unwrap_or(f64::NAN),
        e_g_converged: r.converged,
        restarts: r.restarts_used,
        c_f: r.c_f.unwrap_or(f64::NAN),
    })
}

impl MeasuresReport {
    pub fn to_text(&self) -> String {
        let flag = if self.e_g_converged { "converged" } else { "not converged" };
        format!(
            "state  {} (n={})\nf_c    {}\nE_g    {} ({flag}, {} restarts)\nC_f    {}\n",
            self.state,
            self.n,
            format_float(self.f_c),
            format_float(self.e_g),
            self.restarts,
            format_float(self.c_f)
        )
    }
}
