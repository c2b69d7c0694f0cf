//! JSON instance files with a public section for Bob and a secret section
//! for Alice. Matrices are stored as lists of hex rows.

use std::path::Path;

use anyhow::{bail, Context, Result};
use hcs_core::codes::LinearCode;
use hcs_core::css::{BobPublic, CssInstance};
use hcs_core::gf2::BitMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub family: String,
    pub seed: u64,
    pub k: usize,
    pub kx: usize,
    pub kz: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicSection {
    pub gz_rows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecretSection {
    pub hx_rows: Vec<String>,
    pub lz_rows: Vec<String>,
    pub t_rows: Vec<String>,
    pub garbage_rows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub theta: f64,
    pub meta: Meta,
    pub public: PublicSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<SecretSection>,
}

impl InstanceFile {
    pub fn from_instance(inst: &CssInstance, family: &str, seed: u64) -> Self {
        Self {
            n: inst.n(),
            theta: inst.theta(),
            meta: Meta {
                family: family.to_string(),
                seed,
                k: inst.k(),
                kx: inst.kx(),
                kz: inst.kz(),
            },
            public: PublicSection {
                gz_rows: inst.cz().generator().to_hex_rows(),
            },
            secret: Some(SecretSection {
                hx_rows: inst.hx().to_hex_rows(),
                lz_rows: inst.lz().to_hex_rows(),
                t_rows: inst.t_map().to_hex_rows(),
                garbage_rows: inst.garbage().to_hex_rows(),
            }),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("malformed instance file {}", path.display()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Bob's view, rebuilt from the public section alone.
    pub fn bob_public(&self) -> Result<BobPublic> {
        let gz = BitMatrix::from_hex_rows(self.n, &self.public.gz_rows).context("bad gz_rows")?;
        if gz.rank() != gz.nrows() {
            bail!("gz_rows are not independent");
        }
        if gz.nrows() != self.meta.kz {
            bail!("gz_rows has {} rows but meta.kz is {}", gz.nrows(), self.meta.kz);
        }
        Ok(BobPublic {
            n: self.n,
            theta: self.theta,
            gz,
        })
    }

    /// Alice's full instance; fails when the secret section is missing or
    /// inconsistent with the public one.
    pub fn instance(&self) -> Result<CssInstance> {
        let Some(secret) = &self.secret else {
            bail!("instance file has no secret section; this command needs Alice's data");
        };
        let public = self.bob_public()?;
        let hx = BitMatrix::from_hex_rows(self.n, &secret.hx_rows).context("bad hx_rows")?;
        let lz = BitMatrix::from_hex_rows(self.n, &secret.lz_rows).context("bad lz_rows")?;
        let garbage = BitMatrix::from_hex_rows(self.n, &secret.garbage_rows).context("bad garbage_rows")?;
        let t = BitMatrix::from_hex_rows(self.n, &secret.t_rows).context("bad t_rows")?;
        let cx = LinearCode::from_parity_check(hx)?;
        let cz = LinearCode::from_generator(public.gz)?;
        let inst = CssInstance::from_parts(self.theta, cx, cz, lz, garbage)?;
        if &t != inst.t_map() {
            bail!("t_rows disagree with [lz_rows; hx_rows; garbage_rows]");
        }
        if (inst.k(), inst.kx(), inst.kz()) != (self.meta.k, self.meta.kx, self.meta.kz) {
            bail!(
                "meta dimensions (k, kx, kz) = ({}, {}, {}) disagree with the matrices ({}, {}, {})",
                self.meta.k,
                self.meta.kx,
                self.meta.kz,
                inst.k(),
                inst.kx(),
                inst.kz()
            );
        }
        Ok(inst)
    }
}
