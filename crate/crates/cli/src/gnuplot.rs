//! Plain-text gnuplot scripts emitted next to the data files.

use std::path::{Path, PathBuf};

use stirap_core::Error;

/// Efficiency-versus-gamma plot, one curve per model.
pub fn gamma_sweep_script(csv: &Path) -> String {
    let data = csv.display();
    format!(
        "set datafile separator ','\n\
         set logscale x\n\
         set xlabel 'Gamma T'\n\
         set ylabel 'final population of |3>'\n\
         set yrange [0:1.05]\n\
         set key bottom left\n\
         plot '< grep microscopic {data}' using 3:6 with linespoints title 'microscopic', \\\n\
         \x20    '< grep phenomenological {data}' using 3:6 with linespoints title 'phenomenological'\n"
    )
}

/// Surface plot of efficiency against gamma and a second grid column.
pub fn surface_script(csv: &Path, second_axis: &str, second_col: usize) -> String {
    let data = csv.display();
    format!(
        "set datafile separator ','\n\
         set logscale x\n\
         set xlabel 'Gamma T'\n\
         set ylabel '{second_axis}'\n\
         set zlabel 'final population of |3>'\n\
         set dgrid3d 40,40\n\
         set hidden3d\n\
         splot '< tail -n +2 {data}' using 3:{second_col}:6 with lines notitle\n"
    )
}

/// Write `script` alongside `data_path` with the extension replaced by `.gp`.
pub fn write_next_to(data_path: &Path, script: &str) -> Result<(), Error> {
    let mut path = PathBuf::from(data_path);
    path.set_extension("gp");
    std::fs::write(&path, script)?;
    println!("wrote gnuplot script to {}", path.display());
    Ok(())
}
