//! `dnaz`: encrypt, decrypt and analyse grayscale images with a DNA
//! reference-sequence key.
//!
//! Exit status: 0 on success, 1 when `attack` breaks the cipher, 2 on any
//! usage, I/O or format error.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use dnaz::analysis::{self, AnalysisReport, PlaneSource, Verdict};
use dnaz::cipher::{self, packed_index_bits, Ciphertext, CIPHERTEXT_MAGIC};
use dnaz::genbank::{self, FetchRequest};
use dnaz::image_io::{load_pgm, save_pgm, Raster};
use dnaz::keystore::{KeyStore, KEYSTORE_MAGIC};
use dnaz::zigzag::ScanMode;

#[derive(Parser)]
#[command(
    name = "dnaz",
    version,
    about = "DNA-coded zigzag substitution cipher for grayscale images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pack a FASTA key sequence into a keystore file and report quad coverage.
    Index {
        fasta: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Encrypt a binary PGM image.
    Encrypt {
        image: PathBuf,
        /// Keystore file or FASTA.
        #[arg(short, long)]
        key: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Fixed seed; drawn from OS entropy when omitted.
        #[arg(long)]
        seed: Option<u64>,
        /// Bit-pack indices to ceil(log2(n-3)) bits each.
        #[arg(long)]
        pack: bool,
        /// Zigzag each 8x8 tile instead of the whole frame.
        #[arg(long)]
        block8: bool,
    },
    /// Decrypt a ciphertext back to PGM.
    Decrypt {
        ciphertext: PathBuf,
        #[arg(short, long)]
        key: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Histogram and adjacent-pixel correlation of an image or ciphertext.
    Analyze {
        input: PathBuf,
        /// Byte of each index to analyse (ciphertexts only; 0 = least significant).
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
        plane: Option<u8>,
        #[arg(long)]
        json: bool,
        /// Also write the 256-row histogram as CSV.
        #[arg(long)]
        histogram_csv: Option<PathBuf>,
    },
    /// XOR mask attack: build M = plain1 ^ view(cipher1), try plain2 == M ^ view(cipher2).
    Attack {
        plain1: PathBuf,
        cipher1: PathBuf,
        plain2: PathBuf,
        cipher2: PathBuf,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=3))]
        plane: u8,
        #[arg(long)]
        json: bool,
    },
    /// Fraction of ciphertext indices that differ.
    Diff { a: PathBuf, b: PathBuf },
    /// Download a nucleotide record as FASTA from NCBI E-utilities.
    Fetch {
        #[arg(default_value = genbank::REFERENCE_ACCESSION)]
        accession: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, env = genbank::EUTILS_BASE_ENV, default_value = genbank::DEFAULT_EUTILS_BASE)]
        endpoint: String,
        /// Seconds.
        #[arg(long, default_value_t = 60)]
        timeout: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| io_error(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, e: io::Error) -> anyhow::Error {
    if e.kind() == io::ErrorKind::NotFound {
        anyhow!("{}: no such file", path.display())
    } else {
        anyhow!("{}: {e}", path.display())
    }
}

fn load_image(path: &Path) -> Result<Raster> {
    load_pgm(&read(path)?).with_context(|| format!("reading image {}", path.display()))
}

fn load_ciphertext(path: &Path) -> Result<Ciphertext> {
    Ciphertext::from_bytes(&read(path)?)
        .with_context(|| format!("reading ciphertext {}", path.display()))
}

/// Accepts either a keystore file or raw FASTA.
fn load_key(path: &Path) -> Result<KeyStore> {
    let bytes = read(path)?;
    let ks = if bytes.starts_with(KEYSTORE_MAGIC) {
        KeyStore::from_bytes(&bytes)?
    } else {
        let text = String::from_utf8(bytes).context("key file is neither a keystore nor text")?;
        KeyStore::from_fasta(&text)?
    };
    Ok(ks)
}

fn os_seed() -> Result<u64> {
    let mut buf = [0u8; 8];
    getrandom::getrandom(&mut buf).map_err(|e| anyhow!("OS entropy unavailable: {e}"))?;
    Ok(u64::from_le_bytes(buf))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Index { fasta, out } => {
            let text = String::from_utf8(read(&fasta)?).context("FASTA is not UTF-8 text")?;
            let ks = KeyStore::from_fasta(&text)
                .with_context(|| format!("parsing {}", fasta.display()))?;
            write(&out, &ks.to_bytes())?;
            print_coverage(&ks);
        }
        Command::Encrypt {
            image,
            key,
            out,
            seed,
            pack,
            block8,
        } => {
            let img = load_image(&image)?;
            let ks = load_key(&key)?;
            let seed = match seed {
                Some(s) => s,
                None => os_seed()?,
            };
            let scan = if block8 {
                ScanMode::Block8
            } else {
                ScanMode::FullFrame
            };
            let ct = cipher::encrypt_with_scan(&img, &ks, seed, scan)?;
            let bytes = if pack {
                ct.to_packed_bytes(packed_index_bits(ks.len()))?
            } else {
                ct.to_bytes()
            };
            write(&out, &bytes)?;
            eprintln!(
                "encrypted {}x{} with seed {seed} -> {} ({} bytes)",
                img.width(),
                img.height(),
                out.display(),
                bytes.len()
            );
        }
        Command::Decrypt {
            ciphertext,
            key,
            out,
        } => {
            let ct = load_ciphertext(&ciphertext)?;
            let ks = load_key(&key)?;
            let img = cipher::decrypt(&ct, &ks)?;
            write(&out, &save_pgm(&img))?;
        }
        Command::Analyze {
            input,
            plane,
            json,
            histogram_csv,
        } => {
            let bytes = read(&input)?;
            let report = if bytes.starts_with(CIPHERTEXT_MAGIC) {
                let ct = Ciphertext::from_bytes(&bytes)?;
                let byte_plane = plane.unwrap_or(0);
                let view = analysis::cipher_view(&ct, byte_plane)?;
                analysis::analyze_plane(&view, PlaneSource::Ciphertext { byte_plane })
            } else {
                if plane.is_some() {
                    bail!("--plane applies only to ciphertext input");
                }
                let img = load_pgm(&bytes).with_context(|| {
                    format!("{} is neither a ciphertext nor a PGM", input.display())
                })?;
                analysis::analyze_plane(&img, PlaneSource::Image)
            };
            if let Some(path) = histogram_csv {
                write(&path, report.histogram.to_csv().as_bytes())?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_report(&report);
            }
        }
        Command::Attack {
            plain1,
            cipher1,
            plain2,
            cipher2,
            plane,
            json,
        } => {
            let c = load_image(&plain1)?;
            let c1 = analysis::cipher_view(&load_ciphertext(&cipher1)?, plane)?;
            let z = load_image(&plain2)?;
            let z1 = analysis::cipher_view(&load_ciphertext(&cipher2)?, plane)?;
            let mask = analysis::xor_mask(&c, &c1)?;
            let result = analysis::mask_attack(&mask, &z1, &z)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&result)?);
            } else {
                let verdict = match result.verdict {
                    Verdict::Resisted => "resisted",
                    Verdict::Broken => "broken",
                };
                println!("verdict         {verdict}");
                println!("match_fraction  {:.6}", result.match_fraction);
            }
            if result.verdict == Verdict::Broken {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Diff { a, b } => {
            let d = analysis::diff_metric(&load_ciphertext(&a)?, &load_ciphertext(&b)?)?;
            println!("{d:.6}");
        }
        Command::Fetch {
            accession,
            out,
            endpoint,
            timeout,
        } => {
            let req = FetchRequest::new(accession)
                .with_endpoint(endpoint)
                .with_timeout(Duration::from_secs(timeout));
            let fasta = genbank::fetch_accession(&req)?;
            match out {
                Some(path) => write(&path, fasta.as_bytes())?,
                None => print!("{fasta}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_coverage(ks: &KeyStore) {
    let seq = ks.sequence();
    let cov = ks.coverage();
    let missing = cov.missing();
    let gap_bases: u64 = seq.gaps().iter().map(|g| g.len).sum();
    println!("source       {}", seq.source_id());
    println!("bases        {}", seq.len());
    println!("gap bases    {gap_bases}");
    println!("windows      {}", ks.index().total());
    println!("fingerprint  {}", hex(ks.fingerprint()));
    println!("occurrences  min {}  max {}", cov.min(), cov.max());
    println!("missing      {} quads", missing.len());
    if !missing.is_empty() {
        let list: Vec<String> = missing
            .iter()
            .map(|q| format!("{q}({})", u8::from(*q)))
            .collect();
        for chunk in list.chunks(8) {
            println!("  {}", chunk.join(" "));
        }
    }
}

fn print_report(r: &AnalysisReport) {
    let source = match &r.source {
        PlaneSource::Image => "image".to_owned(),
        PlaneSource::Ciphertext { byte_plane } => format!("ciphertext (byte plane {byte_plane})"),
    };
    let h = &r.histogram;
    println!("source        {source}");
    println!("size          {} x {}", r.width, r.height);
    println!(
        "histogram     min {}  max {}  mean {:.2}  max|dev| {:.2}  chi2 {:.2}",
        h.bins.iter().min().unwrap_or(&0),
        h.bins.iter().max().unwrap_or(&0),
        h.mean(),
        r.histogram_max_deviation,
        r.histogram_chi_square
    );
    match &r.correlation {
        None => println!("correlation   n/a (plane smaller than 2x2)"),
        Some(c) => {
            for d in analysis::Direction::ALL {
                let dc = c.get(d);
                let r = dc.r.map_or("n/a".to_owned(), |v| format!("{v:+.6}"));
                println!("r_{:<11} {r:>10}  ({} pairs)", d.name(), dc.pairs);
            }
        }
    }
}
