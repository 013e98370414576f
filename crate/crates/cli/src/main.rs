mod args;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use multisim_core::experiments::{
    equisimilarity_extents, run_strictness, similarity_map_2d, write_csv, write_csv_file,
    CurveTable, Experiment, SweepConfig,
};
use multisim_core::fmt::sig17;
use multisim_core::netpbm::{read_ppm_file, write_file, write_pgm_mask, write_pgm_raster};
use multisim_core::segmentation::{default_threshold, parse_samples};
use multisim_core::{
    build_segmenter, segment, similarity, Error, Grid2d, Raster, Result, SeedSample,
    SimilarityParams,
};

use args::{BenchArgs, BenchKind, Cli, Command, EquisimArgs, KernelArgs, Map2dArgs, SegmentArgs};

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // A bare `multisim` prints help but is still a usage error.
            let missing = e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand;
            let code = if e.use_stderr() || missing {
                EXIT_USAGE
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("multisim: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_io() {
        EXIT_IO
    } else if matches!(e, Error::InvalidParam(_)) {
        EXIT_USAGE
    } else {
        EXIT_DOMAIN
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Kernel(a) => kernel(a),
        Command::Bench(a) => bench(a),
        Command::Map2d(a) => map2d(a),
        Command::Equisim(a) => equisim(a),
        Command::Segment(a) => segment_image(a),
    }
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

fn kernel(a: KernelArgs) -> Result<()> {
    let value = similarity(&a.x, &a.y, &a.kernel.params()?)?;
    let mut out = stdout();
    writeln!(out, "{}", sig17(value))?;
    out.flush()?;
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    let experiment = match a.experiment {
        BenchKind::Displacement => Experiment::Displacement,
        BenchKind::Intensity => Experiment::Intensity,
        BenchKind::Width => Experiment::Width,
        BenchKind::Noise => Experiment::Noise,
        BenchKind::Interference => Experiment::Interference,
        BenchKind::Sensitivity => Experiment::Sensitivity,
        BenchKind::Angles => Experiment::Angles,
        BenchKind::Strictness => a.base.into(),
    };
    let mut cfg = SweepConfig::for_experiment(experiment);
    if let Some(sigma) = a.sigma {
        cfg.sigma = sigma;
    }
    if let Some((w, h)) = a.size {
        cfg.width = w;
        cfg.height = h;
    }
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = a.trials {
        cfg.trials = trials;
    }
    if let Some(s) = a.interference_sigma {
        cfg.interference_sigma = s;
    }
    if !a.values.is_empty() {
        cfg.values = a.values;
    }
    if !a.method.is_empty() {
        if matches!(a.experiment, BenchKind::Sensitivity | BenchKind::Strictness) {
            return Err(Error::InvalidParam(format!(
                "--method does not apply to the {:?} sweep",
                a.experiment
            )));
        }
        cfg.methods = a.method.into_iter().map(SimilarityParams::new).collect();
    }

    let table = match a.experiment {
        BenchKind::Strictness => run_strictness(experiment, &cfg, &a.d_values)?,
        _ => experiment.run(&cfg)?,
    };
    emit_table(&table, a.out.as_deref())
}

fn emit_table(table: &CurveTable, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => write_csv_file(table, path),
        None => write_csv(table, stdout()),
    }
}

fn map2d(a: Map2dArgs) -> Result<()> {
    let (lo, hi) = a.bounds;
    let grid = Grid2d::square(lo, hi, a.resolution)?;
    let map = similarity_map_2d(&a.reference, &grid, &a.kernel.params()?)?;

    let write_rows = |w: &mut dyn Write| -> Result<()> {
        writeln!(w, "x,y,value")?;
        for row in 0..grid.ny {
            for col in 0..grid.nx {
                writeln!(
                    w,
                    "{},{},{}",
                    sig17(grid.x(col)),
                    sig17(grid.y(row)),
                    sig17(map.get(col, row))
                )?;
            }
        }
        w.flush()?;
        Ok(())
    };
    match &a.out {
        Some(path) => write_file(path, |w| write_rows(w))?,
        None if a.pgm.is_none() => write_rows(&mut stdout())?,
        None => {}
    }
    if let Some(path) = &a.pgm {
        // Image rows run top to bottom, so flip to put the highest y first.
        let ny = map.height();
        let flipped = Raster::from_fn(map.width(), ny, |x, y| map.get(x, ny - 1 - y))?;
        write_file(path, |w| write_pgm_raster(&flipped, w))?;
    }
    Ok(())
}

fn equisim(a: EquisimArgs) -> Result<()> {
    let ext = equisimilarity_extents(&a.reference, a.level)?;
    let mut out = stdout();
    writeln!(out, "level,c,e")?;
    writeln!(
        out,
        "{},{},{}",
        sig17(ext.level),
        sig17(ext.c),
        sig17(ext.e)
    )?;
    out.flush()?;
    Ok(())
}

fn segment_image(a: SegmentArgs) -> Result<()> {
    let mut samples: Vec<SeedSample> = Vec::new();
    if let Some(path) = &a.samples {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        samples.extend(parse_samples(&text, a.window)?);
    }
    samples.extend(
        a.sample
            .iter()
            .map(|&(x, y)| SeedSample::new(x, y, a.window)),
    );
    if samples.is_empty() {
        return Err(Error::InvalidParam(
            "no seed samples: pass --samples FILE or --sample x,y".into(),
        ));
    }

    let img = read_ppm_file(&a.image)?;
    let params = a.kernel.params()?;
    let threshold = a
        .threshold
        .unwrap_or_else(|| default_threshold(params.method()));
    let seg = build_segmenter(&img, &samples, params, threshold)?;
    let mask = segment(&img, &seg)?;
    match &a.out {
        Some(path) => write_file(path, |w| write_pgm_mask(&mask, w)),
        None => write_pgm_mask(&mask, stdout()),
    }
}
