//! The three-sample problem: which of two samples was `z` generated like?

use serde::{Deserialize, Serialize};

use crate::distance::{distance, DistanceEstimate, Truncation};
use crate::error::Result;
use crate::sample::{common_alphabet, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub label: Label,
    pub d_xz: DistanceEstimate,
    pub d_yz: DistanceEstimate,
}

/// Labels `z` with whichever of `x`, `y` is nearer in `d̂`; exact ties go to `x`.
pub fn three_sample(x: &Sample, y: &Sample, z: &Sample, t: &Truncation) -> Result<ClassifyResult> {
    common_alphabet([x, y, z])?;
    let (d_xz, d_yz) = rayon::join(|| distance(x, z, t), || distance(y, z, t));
    let (d_xz, d_yz) = (d_xz?, d_yz?);
    let label = if d_xz.value <= d_yz.value { Label::X } else { Label::Y };
    Ok(ClassifyResult { label, d_xz, d_yz })
}
