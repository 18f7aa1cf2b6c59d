//! CSV dumps of the mesh, δ matrices, assembled operators and spectra.

use std::path::Path;

use spencer_core::geometry::parameterize;
use spencer_core::lie_core::{SpencerExtension, SymBasis};
use spencer_core::spectral_verify::{assembled_system, operator_spectrum, MirrorConfig};
use spencer_core::spencer_assembly::OperatorMatrix;

use crate::report::{num, write_csv};
use crate::CliError;

fn write_triplets(dir: &Path, name: &str, op: &OperatorMatrix) -> Result<(), CliError> {
    let m = &op.entries;
    let rows = (0..m.ncols()).flat_map(|j| {
        (0..m.nrows()).filter_map(move |i| {
            let v = m[(i, j)];
            (v != 0.0).then(|| vec![i.to_string(), j.to_string(), num(v)])
        })
    });
    write_csv(dir, name, &["row", "col", "value"], rows)?;
    Ok(())
}

pub fn dump_run(config: &MirrorConfig, dir: &Path) -> Result<(), CliError> {
    let mesh = parameterize(&config.curve)?;
    let rows = (0..mesh.len()).map(|i| {
        vec![
            i.to_string(),
            num(mesh.t_values[i]),
            num(mesh.nodes[i][0]),
            num(mesh.nodes[i][1]),
            num(mesh.arc_weights[i]),
            num(mesh.edge_lengths[i]),
        ]
    });
    write_csv(dir, "mesh.csv", &["index", "t", "x", "y", "h", "edge_length"], rows)?;

    let disc = config.discretization()?;
    let plus = config.dual();
    let ext = SpencerExtension::new(&disc.algebra, &plus, config.q_max)?;
    let dim = disc.algebra.dim();
    for q in 0..config.q_max {
        let mat = ext.matrix(q)?;
        let cols = SymBasis::new(dim, q);
        let rows_basis = SymBasis::new(dim, q + 1);
        let mut header = vec!["monomial".to_string()];
        header.extend((0..cols.len()).map(|c| cols.label(c)));
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = (0..mat.nrows()).map(|r| {
            let mut row = vec![rows_basis.label(r)];
            row.extend((0..mat.ncols()).map(|c| num(mat[(r, c)])));
            row
        });
        write_csv(dir, &format!("delta_q{q}.csv"), &header_refs, rows)?;
    }

    let minus = plus.mirror();
    for k in 0..2 {
        let (lap_p, mass_p) = assembled_system(&disc, config, &plus, k)?;
        let (lap_m, mass_m) = assembled_system(&disc, config, &minus, k)?;
        write_triplets(dir, &format!("laplacian_k{k}_plus.csv"), &lap_p)?;
        write_triplets(dir, &format!("laplacian_k{k}_minus.csv"), &lap_m)?;
        write_triplets(dir, &format!("mass_k{k}.csv"), &mass_p)?;
        let spec_p = operator_spectrum(&lap_p, &mass_p)?;
        let spec_m = operator_spectrum(&lap_m, &mass_m)?;
        let rows = spec_p
            .eigenvalues
            .iter()
            .zip(&spec_m.eigenvalues)
            .enumerate()
            .map(|(i, (p, m))| vec![i.to_string(), num(*p), num(*m)]);
        write_csv(dir, &format!("eigenvalues_k{k}.csv"), &["index", "plus", "minus"], rows)?;
    }
    Ok(())
}
