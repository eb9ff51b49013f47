// temporary probe: breakdown of the optimum per row
use grsq_core::analysis::{grid_f512_z1, isd_workfactor};
fn main() {
    for row in grid_f512_z1() {
        let wf = isd_workfactor(row.n, row.k, 512, row.t_eff()).unwrap();
        println!(
            "t={:2} k={:3} t_eff={:2} -> wf={:6.2} p={} l={:2}",
            row.t, row.k, wf.t_eff, wf.log2_wf, wf.p, wf.l
        );
    }
}
