//! Command-line front end: `cover`, `uncover` and `inspect`.
//!
//! Exit statuses:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage or I/O error |
//! | 2 | unreadable or unsupported BMP, image too small |
//! | 3 | payload does not fit |
//! | 4 | invalid parameters |
//! | 5 | not a stego image |
//! | 6 | carried frame is corrupt |

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use brightmark::analysis::CapacityFigures;
use brightmark::{
    decode_bmp, encode_bmp, frame, hide, reveal, AnalysisReport, Error, RawImage, StegoParams,
};
use clap::{Args, Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FORMAT: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_PARAMS: i32 = 4;
pub const EXIT_NOT_STEGO: i32 = 5;
pub const EXIT_CORRUPT: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "brightmark", version, about = "Hide data in 24-bit BMP images")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hide a message in a BMP image.
    Cover(CoverArgs),
    /// Recover a message hidden by `cover`.
    Uncover(UncoverArgs),
    /// Report capacity, intensity census and PSNR for an image.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long = "out", value_name = "PATH")]
    pub output: PathBuf,
    #[command(flatten)]
    pub message: MessageSource,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct MessageSource {
    /// Message given inline; its UTF-8 bytes are embedded as-is.
    #[arg(long, value_name = "STR")]
    pub text: Option<String>,
    /// Text file whose bytes are embedded.
    #[arg(long, value_name = "PATH")]
    pub text_file: Option<PathBuf>,
    /// Arbitrary binary file whose bytes are embedded.
    #[arg(long, value_name = "PATH")]
    pub payload_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Brightness shift applied after embedding (1..=254).
    #[arg(long, value_name = "INT", allow_negative_numbers = true)]
    pub level: i64,
    /// Channels to use: 1=R 2=G 3=B 4=RG 5=RB 6=GB 7=RGB.
    #[arg(long, value_name = "INT", allow_negative_numbers = true)]
    pub mode: i64,
    /// Upper bound of the collapsed intensity band; upper + level must be < 255.
    #[arg(long, value_name = "INT", allow_negative_numbers = true)]
    pub upper: i64,
}

#[derive(Debug, Args)]
pub struct UncoverArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Where to write the recovered bytes. Without it they go to stdout.
    #[arg(long = "out", value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Print the recovered bytes to stdout followed by a newline.
    #[arg(long)]
    pub as_text: bool,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "INT", requires_all = ["mode", "upper"], allow_negative_numbers = true)]
    pub level: Option<i64>,
    #[arg(long, value_name = "INT", requires_all = ["level", "upper"], allow_negative_numbers = true)]
    pub mode: Option<i64>,
    #[arg(long, value_name = "INT", requires_all = ["level", "mode"], allow_negative_numbers = true)]
    pub upper: Option<i64>,
    /// Count pixel bytes strictly above this intensity.
    #[arg(long, value_name = "INT")]
    pub census: Option<u8>,
    /// Reference image for PSNR.
    #[arg(long = "ref", value_name = "PATH")]
    pub reference: Option<PathBuf>,
    /// Emit key=value lines instead of the human-readable report.
    #[arg(long)]
    pub kv: bool,
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BadMagic
            | Error::Truncated { .. }
            | Error::UnsupportedFormat(_)
            | Error::InvalidImage(_)
            | Error::ImageTooSmall { .. }
            | Error::DimensionMismatch(..) => EXIT_FORMAT,
            Error::CapacityExceeded { .. } | Error::MessageTooLarge(_) => EXIT_CAPACITY,
            Error::InvalidMode(_) | Error::InvalidParams(_) => EXIT_PARAMS,
            Error::NotAStegoImage => EXIT_NOT_STEGO,
            Error::CorruptFrame { .. } => EXIT_CORRUPT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| io_failure(path, e))
}

fn load_image(path: &Path) -> Result<RawImage, Failure> {
    let bytes = read(path)?;
    decode_bmp(&bytes).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

impl ParamArgs {
    fn resolve(&self) -> Result<StegoParams, Failure> {
        Ok(StegoParams::from_ints(self.level, self.mode, self.upper)?)
    }
}

impl MessageSource {
    fn load(&self) -> Result<Vec<u8>, Failure> {
        match (&self.text, &self.text_file, &self.payload_file) {
            (Some(t), _, _) => Ok(t.as_bytes().to_vec()),
            (_, Some(p), _) | (_, _, Some(p)) => read(p),
            _ => Err(Failure {
                code: EXIT_USAGE,
                message: "no message source given".into(),
            }),
        }
    }
}

pub fn run_cover(args: &CoverArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let params = args.params.resolve()?;
    let message = args.message.load()?;
    let image = load_image(&args.input)?;

    let stego = hide(&image, &message, &params)?;
    let figures = CapacityFigures::measure(&image, &params);
    let used = frame(&message)?.len();
    let file = encode_bmp(&stego);
    fs::write(&args.output, &file).map_err(|e| io_failure(&args.output, e))?;
    writeln!(
        out,
        "capacity: used {used} of {} bits ({} message bytes)",
        figures.capacity_bits,
        message.len()
    )
    .and_then(|_| {
        writeln!(
            out,
            "wrote {} ({} bytes)",
            args.output.display(),
            file.len()
        )
    })
    .map_err(|e| io_failure(Path::new("<stdout>"), e))
}

pub fn run_uncover(args: &UncoverArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let stego = load_image(&args.input)?;
    let message = reveal(&stego)?;
    if let Some(path) = &args.output {
        fs::write(path, &message).map_err(|e| io_failure(path, e))?;
    }
    let stdout_err = |e| io_failure(Path::new("<stdout>"), e);
    if args.as_text {
        out.write_all(&message).map_err(stdout_err)?;
        out.write_all(b"\n").map_err(stdout_err)?;
    } else if args.output.is_none() {
        out.write_all(&message).map_err(stdout_err)?;
    }
    Ok(())
}

pub fn run_inspect(args: &InspectArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let image = load_image(&args.input)?;
    let params = match (args.level, args.mode, args.upper) {
        (Some(l), Some(m), Some(u)) => Some(StegoParams::from_ints(l, m, u)?),
        _ => None,
    };
    let reference = args.reference.as_deref().map(load_image).transpose()?;
    let report = AnalysisReport::build(&image, params.as_ref(), args.census, reference.as_ref())?;
    let text = if args.kv {
        report.render_kv()
    } else {
        report.render_text()
    };
    out.write_all(text.as_bytes())
        .map_err(|e| io_failure(Path::new("<stdout>"), e))
}

/// Parses `argv` and runs the selected command, returning the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Cover(a) => run_cover(a, out),
        Command::Uncover(a) => run_uncover(a, out),
        Command::Inspect(a) => run_inspect(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_disjoint() {
        let codes = [
            EXIT_OK,
            EXIT_USAGE,
            EXIT_FORMAT,
            EXIT_CAPACITY,
            EXIT_PARAMS,
            EXIT_NOT_STEGO,
            EXIT_CORRUPT,
        ];
        let mut sorted = codes.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), codes.len());
    }

    #[test]
    fn error_mapping() {
        assert_eq!(Failure::from(Error::BadMagic).code, EXIT_FORMAT);
        assert_eq!(
            Failure::from(Error::CapacityExceeded {
                required: 2,
                available: 1
            })
            .code,
            EXIT_CAPACITY
        );
        assert_eq!(
            Failure::from(Error::InvalidParams(String::new())).code,
            EXIT_PARAMS
        );
        assert_eq!(Failure::from(Error::NotAStegoImage).code, EXIT_NOT_STEGO);
    }

    #[test]
    fn message_sources_are_exclusive() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            [
                "brightmark",
                "cover",
                "--in",
                "a",
                "--out",
                "b",
                "--text",
                "x",
                "--payload-file",
                "y",
                "--level",
                "1",
                "--mode",
                "1",
                "--upper",
                "1",
            ],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["brightmark", "--help"], &mut out, &mut err), EXIT_OK);
        assert!(String::from_utf8_lossy(&out).contains("cover"));
    }
}
