//! Security and cost arithmetic: correctable-syndrome probability, the
//! non-binary information-set-decoding work-factor model, the star-product
//! distinguisher experiment, the subcode vulnerability audit, the
//! distinguisher-attack-procedure lower bound, and the key-size /
//! encryption / decryption cost model.

mod complexity;
mod distinguisher;
mod isd;
mod pe;
mod subcode;

pub use complexity::{
    dap_lower_bound, goppa_costs, grs_costs, rsa_costs, table3_preset, AnalysisRow, CostModel,
};
pub use distinguisher::{distinguisher_experiment, star_product_dim, DistinguisherReport};
pub use isd::{isd_workfactor, IsdError, WfReport};
pub use pe::{pe_correctable, pe_correctable_exact};
pub use subcode::{subcode_check, SubcodeFinding};

use crate::qtransform::Ratio;

/// One row of the published work-factor grids: secret-code correction
/// capability together with the derived dimensions (n fixed per grid,
/// k = n - 2t, m = 1 + (r-3)/n).
#[derive(Debug, Clone, Copy)]
pub struct GridRow {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub t_pub: usize,
    pub z: usize,
}

impl GridRow {
    fn derive(n: usize, t: usize, z: usize) -> GridRow {
        let k = n - 2 * t;
        let m = Ratio::distinguisher_safe(n, n - k);
        GridRow {
            n,
            k,
            t,
            t_pub: m.t_pub(t),
            z,
        }
    }

    /// Effective error count for the ISD attacker: t_pub - z.
    pub fn t_eff(&self) -> usize {
        self.t_pub - self.z
    }
}

const T_GRID_F307: [usize; 15] = [32, 34, 35, 37, 39, 40, 42, 43, 45, 46, 47, 49, 51, 52, 54];
const T_GRID_F512: [usize; 15] = [21, 26, 29, 31, 34, 37, 39, 42, 44, 47, 49, 54, 57, 60, 62];

/// The fifteen n = 306 rows over F_307 (z = 1).
pub fn grid_f307_z1() -> Vec<GridRow> {
    T_GRID_F307
        .iter()
        .map(|&t| GridRow::derive(306, t, 1))
        .collect()
}

/// The fifteen n = 511 rows over F_512 (z = 1).
pub fn grid_f512_z1() -> Vec<GridRow> {
    T_GRID_F512
        .iter()
        .map(|&t| GridRow::derive(511, t, 1))
        .collect()
}

/// The fifteen n = 511 rows over F_512 with z = 2.
pub fn grid_f512_z2() -> Vec<GridRow> {
    T_GRID_F512
        .iter()
        .map(|&t| GridRow::derive(511, t, 2))
        .collect()
}
