//! Writing and reading models, sample sets, traces and spectra.

use rankfit::benchmarks::{gen_delay_rod, sample_frequencies};
use rankfit::compression::{project, Order};
use rankfit::io::{read_model, read_samples, read_spectrum, write_model, write_samples, write_spectrum};

fn main() -> rankfit::Result<()> {
    let dir = std::env::temp_dir().join("rankfit-file-formats");
    std::fs::create_dir_all(&dir)?;

    let gt = gen_delay_rod(9, 1.0)?;
    let samples = sample_frequencies(&gt.model, 4, 0.1, 10.0, true)?;
    write_model(&dir.join("model.json"), &gt.model)?;
    write_samples(&dir.join("samples.json"), &samples)?;
    assert_eq!(read_model(&dir.join("model.json"))?, gt.model);
    assert_eq!(read_samples(&dir.join("samples.json"))?, samples);

    let (_, report) = project(&gt.model, Order::Fixed(2))?;
    write_spectrum(&dir.join("sv.csv"), &report)?;
    println!("{} spectrum rows", read_spectrum(&dir.join("sv.csv"))?.len());

    let text = std::fs::read_to_string(dir.join("samples.json"))?;
    println!("{}", text.lines().take(12).collect::<Vec<_>>().join("\n"));
    println!("files in {}", dir.display());
    Ok(())
}
