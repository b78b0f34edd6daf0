//! Randomized reference-count exerciser. A seeded sequence of retains,
//! releases, dynamic casts and Expected/Error model constructions runs
//! against a runtime; afterwards every reference is dropped and the runtime
//! must report no live errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expected::{ErrorModel, ExpectedModel};
use crate::idl::compile_source;
use crate::runtime::{ErrorHandle, ModuleId, Runtime, Trap, TypeId, Value};

const MODULE: &str = "module Lifetime
enum Alpha : Error { case first case second case third }
enum Beta : Error { case only }
func fail(pick: Int) throws -> Int {
    if pick == 0 { throw Alpha.first }
    if pick == 1 { throw Alpha.third }
    if pick == 2 { throw Beta.only }
    return pick
}
";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LifetimeStats {
    pub steps: usize,
    pub retains: usize,
    pub releases: usize,
    pub casts: usize,
    pub expected_built: usize,
    pub peak_live: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LifetimeFailure {
    #[error("step {step}: trap: {trap}")]
    Trap { step: usize, trap: Trap },
    #[error("step {step}: dynamic cast changed refcount from {before} to {after}")]
    CastChangedRefcount {
        step: usize,
        before: u32,
        after: u32,
    },
    #[error("step {step}: dynamic cast answered {got} for a {expected} match")]
    WrongCast {
        step: usize,
        expected: bool,
        got: bool,
    },
    #[error("step {step}: Expected is not exactly one of value / error")]
    NotExclusive { step: usize },
    #[error("{0} error boxes still live after all references were dropped")]
    Leak(u64),
}

/// Runs one seeded sequence of `steps` operations on a fresh runtime.
pub fn run_sequence(seed: u64, steps: usize) -> Result<LifetimeStats, LifetimeFailure> {
    let rt = Runtime::new();
    let stats = exercise(&rt, seed, steps)?;
    match rt.live_errors() {
        0 => Ok(stats),
        n => Err(LifetimeFailure::Leak(n)),
    }
}

fn exercise(rt: &Runtime, seed: u64, steps: usize) -> Result<LifetimeStats, LifetimeFailure> {
    let module = compile_source(MODULE).expect("built-in module is valid");
    let module_id: ModuleId = rt.load_validated(module).expect("fresh runtime");
    let alpha = TypeId::new("Lifetime", "Alpha");
    let beta = TypeId::new("Lifetime", "Beta");
    let stranger = TypeId::new("Elsewhere", "Alpha");
    let types = [(&alpha, 3usize), (&beta, 1usize)];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = LifetimeStats::default();
    // Each entry is one owned reference.
    let mut owned: Vec<ErrorHandle> = Vec::new();
    let mut expecteds: Vec<ExpectedModel<'_>> = Vec::new();
    let mut models: Vec<ErrorModel<'_>> = Vec::new();

    for step in 0..steps {
        let trap = |trap| LifetimeFailure::Trap { step, trap };
        match rng.gen_range(0..10) {
            0 => {
                let (ty, n) = types[rng.gen_range(0..types.len())];
                owned.push(rt.new_error(ty, rng.gen_range(0..n)).map_err(trap)?);
            }
            1 => {
                let mut err = ErrorHandle::NULL;
                let mut ret = Value::Unit;
                let pick = Value::Int(rng.gen_range(0..4));
                rt.invoke(module_id, 0, &[pick], &mut err, &mut ret)
                    .map_err(trap)?;
                if !err.is_null() {
                    owned.push(err);
                }
            }
            2 if !owned.is_empty() => {
                let h = owned[rng.gen_range(0..owned.len())];
                owned.push(rt.retain(h).map_err(trap)?);
                stats.retains += 1;
            }
            3 if !owned.is_empty() => {
                let h = owned.swap_remove(rng.gen_range(0..owned.len()));
                rt.release(h).map_err(trap)?;
                stats.releases += 1;
            }
            4 if !owned.is_empty() => {
                let h = owned[rng.gen_range(0..owned.len())];
                let target = [&alpha, &beta, &stranger][rng.gen_range(0..3)];
                let actual = rt.error_box(h).map_err(trap)?.type_id().clone();
                let before = rt.refcount(h).unwrap_or(0);
                let cast = rt.dyncast(h, target).map_err(trap)?;
                let after = rt.refcount(h).unwrap_or(0);
                if before != after {
                    return Err(LifetimeFailure::CastChangedRefcount {
                        step,
                        before,
                        after,
                    });
                }
                let expected = &actual == target;
                if cast.matched != expected {
                    return Err(LifetimeFailure::WrongCast {
                        step,
                        expected,
                        got: cast.matched,
                    });
                }
                stats.casts += 1;
            }
            5 if !owned.is_empty() => {
                let h = owned.swap_remove(rng.gen_range(0..owned.len()));
                expecteds.push(ExpectedModel::from_error(rt, h));
                stats.expected_built += 1;
            }
            6 => {
                expecteds.push(ExpectedModel::from_value(rt, Value::Int(rng.gen())));
                stats.expected_built += 1;
            }
            7 if !expecteds.is_empty() => {
                let i = rng.gen_range(0..expecteds.len());
                if rng.gen_bool(0.5) {
                    let copy = expecteds[i].clone();
                    expecteds.push(copy);
                } else {
                    drop(expecteds.swap_remove(i));
                }
            }
            8 if !owned.is_empty() => {
                let h = owned[rng.gen_range(0..owned.len())];
                models.push(ErrorModel::new(rt, h));
            }
            9 if !models.is_empty() => {
                let i = rng.gen_range(0..models.len());
                match rng.gen_range(0..3) {
                    0 => {
                        let copy = models[i].clone();
                        models.push(copy);
                    }
                    1 => {
                        let m = models.swap_remove(i);
                        expecteds.push(ExpectedModel::from_error_model(m));
                        stats.expected_built += 1;
                    }
                    _ => drop(models.swap_remove(i)),
                }
            }
            _ => {}
        }
        if let Some(e) = expecteds.last() {
            if e.has_value() == e.holds_error() {
                return Err(LifetimeFailure::NotExclusive { step });
            }
        }
        stats.peak_live = stats.peak_live.max(rt.live_errors());
        stats.steps += 1;
    }

    drop(expecteds);
    drop(models);
    for h in owned {
        rt.release(h)
            .map_err(|trap| LifetimeFailure::Trap { step: steps, trap })?;
        stats.releases += 1;
    }
    Ok(stats)
}
