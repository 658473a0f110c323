//! Named charts paired with the exact volume their density integrates to.

use crate::charts::{
    so3_euler_chart, so3_matrix_chart, sphere_chart, su2_embedding_chart, su2_euler_chart, su2_matrix_chart,
    su3_matrix_chart, Chart,
};
use crate::closed_forms::{vol_so, vol_sphere, vol_su};
use crate::exact::ExactVolume;
use crate::states::{bloch_ball_chart, qubit_state_volume};

/// Fixed chart names; spheres are addressed as `sphere-N`.
pub const CHART_NAMES: [&str; 8] = [
    "su2-euler",
    "su2-embedding",
    "so3-euler",
    "su2-maurer-cartan",
    "so3-maurer-cartan",
    "su3-maurer-cartan",
    "su3",
    "qubit-states",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TargetError {
    #[error("unknown chart '{0}'")]
    UnknownChart(String),
    #[error("{0}")]
    InvalidSphere(String),
}

#[derive(Debug, Clone)]
pub struct VerificationTarget {
    pub chart: Chart,
    pub exact: ExactVolume,
}

pub fn verification_target(name: &str) -> Result<VerificationTarget, TargetError> {
    let target = |chart, exact| VerificationTarget { chart, exact };
    let su2 = || vol_su(2).expect("SU(2)");
    let so3 = || vol_so(3).expect("SO(3)");
    Ok(match name {
        "su2-euler" => target(su2_euler_chart(), su2()),
        "su2-embedding" => target(su2_embedding_chart(), su2()),
        "so3-euler" => target(so3_euler_chart(), so3()),
        "su2-maurer-cartan" => target(su2_matrix_chart().to_chart(), su2()),
        "so3-maurer-cartan" => target(so3_matrix_chart().to_chart(), so3()),
        "su3" | "su3-maurer-cartan" => target(su3_matrix_chart().to_chart(), vol_su(3).expect("SU(3)")),
        "qubit-states" => target(bloch_ball_chart(), qubit_state_volume()),
        other => {
            let n: u32 = other
                .strip_prefix("sphere-")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| TargetError::UnknownChart(other.to_string()))?;
            let chart = sphere_chart(n as usize).map_err(|e| TargetError::InvalidSphere(e.to_string()))?;
            let exact = vol_sphere(n).map_err(|e| TargetError::InvalidSphere(e.to_string()))?;
            target(chart, exact)
        }
    })
}
