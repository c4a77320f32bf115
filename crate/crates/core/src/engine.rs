//! Memoizing front end over [`crate::hurwitz`] with an optional disk cache.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::cache::{CacheKey, DiskCache};
use crate::error::Result;
use crate::exact::{int, Rational};
use crate::hurwitz::{self, check_capacity, CoefficientRequest, Family};
use crate::pseries::{GenusTable, QSeries};

#[derive(Clone)]
enum Stored {
    Table(GenusTable),
    Series(QSeries),
}

/// Computes tables and series once per key.
///
/// Results are identical with or without a disk cache; the cache only saves
/// time across processes.
#[derive(Default)]
pub struct Engine {
    disk: Option<DiskCache>,
    memo: Mutex<HashMap<CacheKey, Stored>>,
}

impl Engine {
    /// In-memory memoization only.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache(disk: DiskCache) -> Self {
        Self { disk: Some(disk), memo: Mutex::default() }
    }

    pub fn disk(&self) -> Option<&DiskCache> {
        self.disk.as_ref()
    }

    fn lookup(&self, key: &CacheKey) -> Option<Stored> {
        self.memo.lock().unwrap().get(key).cloned()
    }

    fn remember(&self, key: CacheKey, value: Stored) {
        self.memo.lock().unwrap().insert(key, value);
    }

    fn table(&self, key: CacheKey, compute: impl FnOnce() -> GenusTable) -> Result<GenusTable> {
        if let Some(Stored::Table(t)) = self.lookup(&key) {
            return Ok(t);
        }
        let table = match self.disk.as_ref().map(|d| d.get(&key)).transpose()?.flatten() {
            Some(json) => GenusTable::from_json(&json)?,
            None => {
                let t = compute();
                if let Some(disk) = &self.disk {
                    disk.put(&key, &t.to_json())?;
                }
                t
            }
        };
        self.remember(key, Stored::Table(table.clone()));
        Ok(table)
    }

    fn series(&self, key: CacheKey, compute: impl FnOnce() -> Result<QSeries>) -> Result<QSeries> {
        if let Some(Stored::Series(s)) = self.lookup(&key) {
            return Ok(s);
        }
        let series = match self.disk.as_ref().map(|d| d.get(&key)).transpose()?.flatten() {
            Some(json) => QSeries::from_json(&json)?,
            None => {
                let s = compute()?;
                if let Some(disk) = &self.disk {
                    disk.put(&key, &s.to_json())?;
                }
                s
            }
        };
        self.remember(key, Stored::Series(series.clone()));
        Ok(series)
    }

    /// `H_g^d` for `d <= degree`, `g <= genera`.
    pub fn k_table(&self, degree: usize, genera: usize) -> Result<GenusTable> {
        check_capacity(degree, genera)?;
        self.table(CacheKey::table("H", degree, genera), || hurwitz::k_genus_table(degree, genera))
    }

    pub fn f_table(&self, degree: usize, genera: usize) -> Result<GenusTable> {
        let k = self.k_table(degree, genera)?;
        self.table(CacheKey::table("F", degree, genera), || {
            crate::pseries::bivariate_log(&k).expect("K(q,t) has constant term 1")
        })
    }

    pub fn b_table(&self, degree: usize, genera: usize) -> Result<GenusTable> {
        check_capacity(degree, genera)?;
        self.table(CacheKey::table("B", degree, genera), || hurwitz::b_genus_table(degree, genera))
    }

    pub fn c_table(&self, degree: usize, genera: usize) -> Result<GenusTable> {
        let b = self.b_table(degree, genera)?;
        self.table(CacheKey::table("C", degree, genera), || {
            crate::pseries::bivariate_log(&b).expect("B(q,t) has constant term 1")
        })
    }

    /// Disconnected counts with every component of genus above `m`.
    pub fn tail_normalized(&self, m: usize, degree: usize, genera: usize) -> Result<GenusTable> {
        let f = self.f_table(degree, genera)?;
        Ok(hurwitz::tail_normalized_from(&f, m))
    }

    pub fn k_n_series(&self, n: u32, degree: usize) -> Result<QSeries> {
        check_capacity(degree, 1)?;
        self.series(CacheKey::series("KN", n, degree), || Ok(hurwitz::k_n_series(n, degree)))
    }

    pub fn l_n_series(&self, n: u32, degree: usize) -> Result<QSeries> {
        let k = self.k_n_series(n, degree)?;
        self.series(CacheKey::series("LN", n, degree), || crate::pseries::series_log(&k))
    }

    /// `Delta_{mN}` truncated at `q^degree`.
    pub fn delta(&self, m: usize, n: u32, degree: usize) -> Result<QSeries> {
        let l = self.l_n_series(n, degree)?;
        let f = self.f_table(degree, m.max(1))?;
        Ok(hurwitz::delta_from(&l, &f, m, n))
    }

    /// Same values as [`hurwitz::coefficient`], served from memoized blocks.
    pub fn coefficient(&self, req: &CoefficientRequest) -> Result<Rational> {
        req.validate()?;
        let d = req.d;
        let exp_coeff = |s: QSeries| s.to_exponential()[d].clone();
        Ok(match req.family {
            Family::KN => exp_coeff(self.k_n_series(req.n.unwrap(), d)?),
            Family::LN => exp_coeff(self.l_n_series(req.n.unwrap(), d)?),
            Family::Delta => exp_coeff(self.delta(req.m.unwrap(), req.n.unwrap(), d)?),
            Family::H => {
                let g = req.g.unwrap();
                self.k_table(d, g)?.get(d, g).clone()
            }
            Family::F => {
                let g = req.g.unwrap();
                self.f_table(d, g)?.get(d, g).clone()
            }
            Family::B => {
                let g = req.g.unwrap();
                self.b_table(d, g)?.get(d, g).clone()
            }
            Family::C => {
                let g = req.g.unwrap();
                self.c_table(d, g)?.get(d, g).clone()
            }
        })
    }
}

/// `d!` times the plain coefficient, i.e. the exponential coefficient.
pub fn exponential_coeff(s: &QSeries, d: usize) -> Rational {
    s.coeff(d) * int(crate::exact::factorial_int(d))
}
