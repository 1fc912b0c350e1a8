//! Inline generator specs: `"long-wall:d=10,l=100,w=0.01"`, `"com-trap"`,
//! `"comb:k=9,p=100"`, `"doubleback:fraction=0.9"`,
//! `"random:seed=42,count=3,convex=1,bw=20,bh=12"`.
//!
//! `run` and `sweep` accept these so a scene never has to touch disk.

use std::collections::BTreeMap;

use swarmnav::scene::{
    gen_com_trap, gen_comb, gen_doubleback, gen_long_wall, gen_random, Scene,
};

/// A parsed generator spec; `seed_override` lets `sweep` stamp one spec
/// with many seeds.
pub struct GenSpec {
    pub name: String,
    params: BTreeMap<String, String>,
}

impl GenSpec {
    pub fn parse(spec: &str) -> Result<GenSpec, String> {
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n, r),
            None => (spec, ""),
        };
        let name = name.trim();
        if !matches!(
            name,
            "long-wall" | "com-trap" | "comb" | "doubleback" | "random"
        ) {
            return Err(format!(
                "unknown generator '{name}' (expected long-wall, com-trap, comb, doubleback, or random)"
            ));
        }
        let mut params = BTreeMap::new();
        for pair in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| format!("generator parameter '{pair}' is not key=value"))?;
            if params.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(format!("generator parameter '{}' given twice", k.trim()));
            }
        }
        Ok(GenSpec {
            name: name.to_string(),
            params,
        })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.params.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| format!("generator parameter {key}={raw} does not parse")),
        }
    }

    fn require<T: std::str::FromStr>(&self, key: &str) -> Result<T, String> {
        self.get(key)?
            .ok_or_else(|| format!("generator '{}' needs parameter {key}=...", self.name))
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<(), String> {
        for key in self.params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(format!(
                    "generator '{}' does not take parameter '{key}' (allowed: {})",
                    self.name,
                    allowed.join(", ")
                ));
            }
        }
        Ok(())
    }

    /// Builds the scene. A `seed_override` replaces the spec's `seed`
    /// (random generator only).
    pub fn build(&self, seed_override: Option<u64>) -> Result<Scene, String> {
        if seed_override.is_some() && self.name != "random" {
            return Err(format!(
                "seed sweeps need the random generator, got '{}'",
                self.name
            ));
        }
        let scene = match self.name.as_str() {
            "long-wall" => {
                self.reject_unknown(&["d", "l", "w"])?;
                gen_long_wall(self.require("d")?, self.require("l")?, self.require("w")?)
                    .map_err(|e| e.to_string())?
            }
            "com-trap" => {
                self.reject_unknown(&[])?;
                gen_com_trap()
            }
            "comb" => {
                self.reject_unknown(&["k", "p", "d"])?;
                gen_comb(self.require("k")?, self.require("p")?, self.get("d")?)
                    .map_err(|e| e.to_string())?
            }
            "doubleback" => {
                self.reject_unknown(&["fraction"])?;
                gen_doubleback(self.require("fraction")?).map_err(|e| e.to_string())?
            }
            "random" => {
                self.reject_unknown(&["seed", "count", "convex", "bw", "bh"])?;
                let seed = match seed_override {
                    Some(s) => s,
                    None => self.require("seed")?,
                };
                let convex = match self.params.get("convex").map(String::as_str) {
                    None | Some("0") | Some("false") => false,
                    Some("1") | Some("true") => true,
                    Some(other) => {
                        return Err(format!(
                            "generator parameter convex={other} must be 0/1/true/false"
                        ))
                    }
                };
                gen_random(
                    seed,
                    self.require("count")?,
                    convex,
                    (
                        self.get("bw")?.unwrap_or(20.0),
                        self.get("bh")?.unwrap_or(12.0),
                    ),
                )
                .map_err(|e| e.to_string())?
            }
            _ => unreachable!("parse() restricts names"),
        };
        Ok(scene)
    }
}


/// Resolves the `--scene FILE` / `--gen SPEC` pair every runner command
/// shares: exactly one source, loaded and validated.
pub fn load_scene(
    scene_path: Option<&std::path::Path>,
    gen_spec: Option<&str>,
) -> Result<Scene, String> {
    let scene = match (scene_path, gen_spec) {
        (Some(_), Some(_)) | (None, None) => {
            return Err("pass exactly one scene source: --scene FILE or --gen SPEC".into())
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            Scene::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, Some(spec)) => GenSpec::parse(spec)?.build(None)?,
    };
    scene.validate().map_err(|e| e.to_string())?;
    Ok(scene)
}
