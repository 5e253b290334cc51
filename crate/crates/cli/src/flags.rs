use std::path::PathBuf;

use clap::Args;
use krein_enclosure::lab::TauChoice;
use serde_json::{Map, Value};

/// Flags are named after config keys; each one given on the command line overrides the
/// same key from `--config`.
pub trait Overlay {
    fn overlay(&self, map: &mut Map<String, Value>);
}

macro_rules! flags {
    ($name:ident { $( $(#[$meta:meta])* $field:ident : $ty:ty => $key:literal ),* $(,)? }) => {
        #[derive(Args, Debug, Clone, Default)]
        pub struct $name {
            /// JSON config; flags override its keys.
            #[arg(long, value_name = "FILE")]
            pub config: Option<PathBuf>,
            /// Output directory for CSV/JSON files and run.json; without it the main
            /// table goes to standard output.
            #[arg(long, value_name = "DIR")]
            pub out: Option<PathBuf>,
            $( $(#[$meta])* pub $field: Option<$ty>, )*
        }

        impl Overlay for $name {
            fn overlay(&self, map: &mut Map<String, Value>) {
                if let Some(v) = &self.out {
                    map.insert("out".into(), serde_json::to_value(v).expect("path is valid JSON"));
                }
                $( if let Some(v) = &self.$field {
                    map.insert($key.into(), serde_json::to_value(v).expect("flag value is valid JSON"));
                } )*
            }
        }
    };
}

flags!(RegionArgs {
    /// disks | hull | bone | halfline
    #[arg(long)]
    kind: String => "kind",
    #[arg(long)]
    a: f64 => "a",
    #[arg(long)]
    b: f64 => "b",
    /// Half-width of the center interval (disks, bone) or left end (halfline).
    #[arg(long)]
    gamma: f64 => "gamma",
    #[arg(long)]
    radius_scale: f64 => "radiusScale",
    /// Isolated disk centers, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    centers: Vec<f64> => "centers",
    #[arg(long)]
    resolution: usize => "resolution",
    /// Also emit the coarser prior hull.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    prior: bool => "prior",
    /// Abscissa range LO,HI of the polyline.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    window: Vec<f64> => "window",
});

flags!(MatrixLabArgs {
    #[arg(long)]
    trials: usize => "trials",
    #[arg(long)]
    seed: u64 => "seed",
    #[arg(long)]
    min_dim: usize => "minDim",
    #[arg(long)]
    max_dim: usize => "maxDim",
    /// LO,HI
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    plus_spectrum: Vec<f64> => "plusSpectrum",
    /// LO,HI
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    minus_spectrum: Vec<f64> => "minusSpectrum",
    /// LO,HI
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coupling: Vec<f64> => "coupling",
    /// LO,HI
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    relative_part: Vec<f64> => "relativePart",
    #[arg(long)]
    lambda_samples: usize => "lambdaSamples",
    #[arg(long)]
    b_steps: usize => "bSteps",
    #[arg(long)]
    nonreal_tol: f64 => "nonrealTol",
    #[arg(long)]
    sign_threshold: f64 => "signThreshold",
});

flags!(PerturbArgs {
    /// Problem file `{signature, A0, V}`; without it problems are generated.
    #[arg(long, value_name = "FILE")]
    problem: PathBuf => "problem",
    #[arg(long)]
    trials: usize => "trials",
    #[arg(long)]
    seed: u64 => "seed",
    #[arg(long)]
    min_dim: usize => "minDim",
    #[arg(long)]
    max_dim: usize => "maxDim",
    /// LO,HI
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    p_spectrum: Vec<f64> => "pSpectrum",
    /// LO,HI
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    v_norm: Vec<f64> => "vNorm",
    /// LO,HI
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    relative_part: Vec<f64> => "relativePart",
    #[arg(long)]
    nonnegative_fraction: f64 => "nonnegativeFraction",
    /// `auto` or a number >= 1
    #[arg(long)]
    tau: TauChoice => "tau",
    #[arg(long)]
    b_steps: usize => "bSteps",
    /// Use only b = 0 (bounded perturbation).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    bounded: bool => "bounded",
    #[arg(long)]
    nonreal_tol: f64 => "nonrealTol",
    #[arg(long)]
    sign_threshold: f64 => "signThreshold",
});

flags!(SlArgs {
    /// step | gaussian | lorentzian | tabulated
    #[arg(long)]
    kind: String => "kind",
    #[arg(long)]
    depth: f64 => "depth",
    #[arg(long)]
    width: f64 => "width",
    /// CSV table `x,q` for kind tabulated.
    #[arg(long, value_name = "FILE")]
    file: PathBuf => "file",
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<f64> => "x",
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    q: Vec<f64> => "q",
    #[arg(long)]
    p: f64 => "p",
    /// Half-length of the computational interval.
    #[arg(long = "L", alias = "l")]
    l: f64 => "L",
    /// Grid points (even).
    #[arg(long)]
    n: usize => "n",
    #[arg(long)]
    tol: f64 => "tol",
    #[arg(long)]
    slack_c: f64 => "slackC",
    #[arg(long)]
    slack_kappa: f64 => "slackKappa",
    #[arg(long)]
    sign_threshold: f64 => "signThreshold",
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    sign_test: bool => "signTest",
    #[arg(long)]
    constants_points: usize => "constantsPoints",
    #[arg(long)]
    constants_max_p: f64 => "constantsMaxP",
});

flags!(Tau0Args {
    /// indicator | extremizer | tabulated
    #[arg(long, alias = "profile")]
    kind: String => "kind",
    #[arg(long)]
    lo: f64 => "lo",
    #[arg(long)]
    hi: f64 => "hi",
    /// Right end of the extremizer support.
    #[arg(long = "X", alias = "x-max")]
    x_max: f64 => "X",
    /// CSV table `x,f1,f2` for kind tabulated.
    #[arg(long, value_name = "FILE")]
    file: PathBuf => "file",
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<f64> => "x",
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    f1: Vec<f64> => "f1",
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    f2: Vec<f64> => "f2",
});

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_given_flags_are_written() {
        let args = RegionArgs {
            a: Some(3.0),
            window: Some(vec![-1.0, 2.0]),
            prior: Some(true),
            ..RegionArgs::default()
        };
        let mut m = Map::new();
        m.insert("b".into(), Value::from(0.9));
        m.insert("a".into(), Value::from(1.0));
        args.overlay(&mut m);
        assert_eq!(Value::Object(m), serde_json::json!({"a": 3.0, "b": 0.9, "window": [-1.0, 2.0], "prior": true}));
    }

    #[test]
    fn tau_flag_keeps_its_form() {
        let mut m = Map::new();
        PerturbArgs {
            tau: Some(TauChoice::Auto),
            ..PerturbArgs::default()
        }
        .overlay(&mut m);
        assert_eq!(m["tau"], Value::from("auto"));
        PerturbArgs {
            tau: Some(TauChoice::Value(2.5)),
            ..PerturbArgs::default()
        }
        .overlay(&mut m);
        assert_eq!(m["tau"], Value::from(2.5));
    }
}
