//! Hybrid-cloud placement: assign software components to private/public VMs
//! minimizing active-VM cost and mean component latency.
//!
//! A genome maps each component to a non-empty replica set of VM indices.
//! Cost sums the per-location price of every VM hosting at least one
//! component; latency averages, per component, the best (minimum) effective
//! latency over its replicas, where public VMs pay a remote penalty.
//! Redundancy can only help latency, distant hosting can only hurt it.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::CloudError;
use crate::objective::ObjectiveVector;
use crate::operator::{CrossoverOperator, Evaluator, OperatorHandle, OperatorPool};
use crate::MoeaError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Private,
    Public,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VmSpec {
    pub id: String,
    pub location: Location,
    pub base_latency_ms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub id: String,
}

/// The optimization problem: the VM fleet, the components to place, and the
/// cost/latency parameters. Immutable once constructed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CloudInstance {
    pub vms: Vec<VmSpec>,
    pub components: Vec<ComponentSpec>,
    pub cost_private: f64,
    pub cost_public: f64,
    pub remote_penalty_ms: f64,
}

impl CloudInstance {
    pub fn validate(&self) -> Result<(), CloudError> {
        if self.vms.is_empty() {
            return Err(CloudError::InvalidInstance("no VMs".into()));
        }
        if self.components.is_empty() {
            return Err(CloudError::InvalidInstance("no components".into()));
        }
        for (name, value) in [
            ("cost_private", self.cost_private),
            ("cost_public", self.cost_public),
            ("remote_penalty_ms", self.remote_penalty_ms),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(CloudError::InvalidInstance(format!(
                    "{name} must be finite and >= 0, got {value}"
                )));
            }
        }
        for vm in &self.vms {
            if !vm.base_latency_ms.is_finite() || vm.base_latency_ms < 0.0 {
                return Err(CloudError::InvalidInstance(format!(
                    "VM {:?} has invalid base latency {}",
                    vm.id, vm.base_latency_ms
                )));
            }
        }
        let mut vm_ids: Vec<&str> = self.vms.iter().map(|v| v.id.as_str()).collect();
        vm_ids.sort_unstable();
        if vm_ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(CloudError::InvalidInstance("duplicate VM id".into()));
        }
        let mut component_ids: Vec<&str> = self.components.iter().map(|c| c.id.as_str()).collect();
        component_ids.sort_unstable();
        if component_ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(CloudError::InvalidInstance("duplicate component id".into()));
        }
        Ok(())
    }

    pub fn vm_cost(&self, vm: usize) -> f64 {
        match self.vms[vm].location {
            Location::Private => self.cost_private,
            Location::Public => self.cost_public,
        }
    }

    /// Base latency plus the remote penalty for public VMs.
    pub fn effective_latency(&self, vm: usize) -> f64 {
        let spec = &self.vms[vm];
        match spec.location {
            Location::Private => spec.base_latency_ms,
            Location::Public => spec.base_latency_ms + self.remote_penalty_ms,
        }
    }

    /// A-priori objective bounds valid for every feasible genome:
    /// cost in [cheapest single VM, all VMs active], latency in
    /// [best effective latency, worst effective latency].
    pub fn objective_bounds(&self) -> [(f64, f64); 2] {
        let cost_min = (0..self.vms.len())
            .map(|v| self.vm_cost(v))
            .fold(f64::INFINITY, f64::min);
        let cost_max = (0..self.vms.len()).map(|v| self.vm_cost(v)).sum();
        let latency_min = (0..self.vms.len())
            .map(|v| self.effective_latency(v))
            .fold(f64::INFINITY, f64::min);
        let latency_max = (0..self.vms.len())
            .map(|v| self.effective_latency(v))
            .fold(f64::NEG_INFINITY, f64::max);
        [(cost_min, cost_max), (latency_min, latency_max)]
    }

    pub fn to_json_string(&self) -> Result<String, CloudError> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self, CloudError> {
        let instance: CloudInstance = serde_json::from_str(text)?;
        instance.validate()?;
        Ok(instance)
    }

    pub fn save(&self, path: &Path) -> Result<(), CloudError> {
        std::fs::write(path, self.to_json_string()?).map_err(|source| CloudError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CloudError> {
        let text = std::fs::read_to_string(path).map_err(|source| CloudError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }
}

/// Tunable parameters for generated instances.
#[derive(Clone, Copy, Debug)]
pub struct InstanceParams {
    pub cost_private: f64,
    pub cost_public: f64,
    pub remote_penalty_ms: f64,
    pub latency_range_ms: (f64, f64),
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            cost_private: 1.0,
            cost_public: 0.4,
            remote_penalty_ms: 40.0,
            latency_range_ms: (1.0, 20.0),
        }
    }
}

/// Deterministic generated instance: the first `floor(public_fraction *
/// n_vms)` VMs are public, base latencies are uniform in the configured
/// range.
pub fn random_instance_with(
    n_vms: usize,
    n_components: usize,
    public_fraction: f64,
    seed: u64,
    params: InstanceParams,
) -> CloudInstance {
    assert!(n_vms >= 1 && n_components >= 1, "counts must be >= 1");
    assert!(
        (0.0..=1.0).contains(&public_fraction),
        "public_fraction must be in [0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_public = (public_fraction * n_vms as f64).floor() as usize;
    let (lat_lo, lat_hi) = params.latency_range_ms;
    let vms = (0..n_vms)
        .map(|v| VmSpec {
            id: format!("vm{v}"),
            location: if v < n_public {
                Location::Public
            } else {
                Location::Private
            },
            base_latency_ms: rng.gen_range(lat_lo..=lat_hi),
        })
        .collect();
    let components = (0..n_components)
        .map(|c| ComponentSpec {
            id: format!("c{c}"),
        })
        .collect();
    CloudInstance {
        vms,
        components,
        cost_private: params.cost_private,
        cost_public: params.cost_public,
        remote_penalty_ms: params.remote_penalty_ms,
    }
}

pub fn random_instance(
    n_vms: usize,
    n_components: usize,
    public_fraction: f64,
    seed: u64,
) -> CloudInstance {
    random_instance_with(
        n_vms,
        n_components,
        public_fraction,
        seed,
        InstanceParams::default(),
    )
}

type ReplicaSet = SmallVec<[usize; 4]>;

/// Per-component replica sets: sorted VM indices, non-empty, no duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementGenome {
    placements: Vec<ReplicaSet>,
}

impl PlacementGenome {
    pub fn new(placements: Vec<Vec<usize>>) -> Self {
        PlacementGenome {
            placements: placements
                .into_iter()
                .map(|mut p| {
                    p.sort_unstable();
                    p.into_iter().collect()
                })
                .collect(),
        }
    }

    pub fn replicas(&self, component: usize) -> &[usize] {
        &self.placements[component]
    }

    pub fn component_count(&self) -> usize {
        self.placements.len()
    }

    pub fn validate(&self, instance: &CloudInstance) -> Result<(), CloudError> {
        if self.placements.len() != instance.components.len() {
            return Err(CloudError::InvalidGenome(format!(
                "genome places {} components, instance has {}",
                self.placements.len(),
                instance.components.len()
            )));
        }
        for (c, replicas) in self.placements.iter().enumerate() {
            if replicas.is_empty() {
                return Err(CloudError::InvalidGenome(format!(
                    "component {:?} has no replicas",
                    instance.components[c].id
                )));
            }
            if replicas.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CloudError::InvalidGenome(format!(
                    "component {:?} has unsorted or duplicate replicas",
                    instance.components[c].id
                )));
            }
            if replicas.iter().any(|&v| v >= instance.vms.len()) {
                return Err(CloudError::InvalidGenome(format!(
                    "component {:?} references a VM out of range",
                    instance.components[c].id
                )));
            }
        }
        Ok(())
    }

    fn insert_replica(&mut self, component: usize, vm: usize) {
        let replicas = &mut self.placements[component];
        match replicas.binary_search(&vm) {
            Ok(_) => {}
            Err(pos) => replicas.insert(pos, vm),
        }
    }

    fn remove_replica(&mut self, component: usize, vm: usize) {
        let replicas = &mut self.placements[component];
        if let Ok(pos) = replicas.binary_search(&vm) {
            replicas.remove(pos);
        }
    }

    /// Serializes as `{"placements":{"c0":["vm0","vm3"],...}}` using the
    /// instance's ids; components sort by id, replicas by VM index.
    pub fn to_json_string(&self, instance: &CloudInstance) -> Result<String, CloudError> {
        self.validate(instance)?;
        let placements: BTreeMap<String, Vec<String>> = self
            .placements
            .iter()
            .enumerate()
            .map(|(c, replicas)| {
                (
                    instance.components[c].id.clone(),
                    replicas
                        .iter()
                        .map(|&v| instance.vms[v].id.clone())
                        .collect(),
                )
            })
            .collect();
        Ok(serde_json::to_string(&GenomeFile { placements })?)
    }

    pub fn from_json_str(text: &str, instance: &CloudInstance) -> Result<Self, CloudError> {
        let file: GenomeFile = serde_json::from_str(text)?;
        let vm_index: BTreeMap<&str, usize> = instance
            .vms
            .iter()
            .enumerate()
            .map(|(v, spec)| (spec.id.as_str(), v))
            .collect();
        let mut placements = vec![ReplicaSet::new(); instance.components.len()];
        let mut seen = vec![false; instance.components.len()];
        let component_index: BTreeMap<&str, usize> = instance
            .components
            .iter()
            .enumerate()
            .map(|(c, spec)| (spec.id.as_str(), c))
            .collect();
        for (component_id, vm_ids) in &file.placements {
            let &c = component_index.get(component_id.as_str()).ok_or_else(|| {
                CloudError::InvalidGenome(format!("unknown component id {component_id:?}"))
            })?;
            seen[c] = true;
            for vm_id in vm_ids {
                let &v = vm_index
                    .get(vm_id.as_str())
                    .ok_or_else(|| CloudError::InvalidGenome(format!("unknown VM id {vm_id:?}")))?;
                placements[c].push(v);
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(CloudError::InvalidGenome(format!(
                "component {:?} is not placed",
                instance.components[missing].id
            )));
        }
        let mut genome = PlacementGenome { placements };
        for replicas in &mut genome.placements {
            replicas.sort_unstable();
        }
        genome.validate(instance)?;
        Ok(genome)
    }
}

#[derive(Serialize, Deserialize)]
struct GenomeFile {
    placements: BTreeMap<String, Vec<String>>,
}

/// Each component placed on exactly one uniformly random VM.
pub fn random_genome<R: Rng>(instance: &CloudInstance, rng: &mut R) -> PlacementGenome {
    let placements = (0..instance.components.len())
        .map(|_| {
            let mut replicas = ReplicaSet::new();
            replicas.push(rng.gen_range(0..instance.vms.len()));
            replicas
        })
        .collect();
    PlacementGenome { placements }
}

/// Cost objective: the summed per-location price of every VM hosting at
/// least one component.
pub fn cost(genome: &PlacementGenome, instance: &CloudInstance) -> f64 {
    debug_assert!(genome.validate(instance).is_ok());
    let mut active = vec![false; instance.vms.len()];
    for replicas in &genome.placements {
        for &v in replicas {
            active[v] = true;
        }
    }
    active
        .iter()
        .enumerate()
        .filter(|(_, &a)| a)
        .map(|(v, _)| instance.vm_cost(v))
        .sum()
}

/// Latency objective: mean over components of the minimum effective latency
/// across their replicas.
pub fn latency(genome: &PlacementGenome, instance: &CloudInstance) -> f64 {
    debug_assert!(genome.validate(instance).is_ok());
    let total: f64 = genome
        .placements
        .iter()
        .map(|replicas| {
            replicas
                .iter()
                .map(|&v| instance.effective_latency(v))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    total / genome.placements.len() as f64
}

/// Cost and latency of one placement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectivePair {
    pub cost: f64,
    pub latency: f64,
}

impl ObjectivePair {
    pub fn of(genome: &PlacementGenome, instance: &CloudInstance) -> Self {
        ObjectivePair {
            cost: cost(genome, instance),
            latency: latency(genome, instance),
        }
    }
}

impl From<ObjectivePair> for ObjectiveVector {
    fn from(pair: ObjectivePair) -> ObjectiveVector {
        ObjectiveVector::new(vec![pair.cost, pair.latency])
    }
}

/// Evaluator plugging the placement problem into the engine.
#[derive(Clone)]
pub struct CloudEvaluator {
    instance: Arc<CloudInstance>,
}

impl CloudEvaluator {
    pub fn new(instance: Arc<CloudInstance>) -> Self {
        CloudEvaluator { instance }
    }

    pub fn instance(&self) -> &Arc<CloudInstance> {
        &self.instance
    }
}

impl Evaluator<PlacementGenome> for CloudEvaluator {
    fn evaluate(&self, genome: &PlacementGenome) -> Result<ObjectiveVector, MoeaError> {
        Ok(ObjectivePair::of(genome, &self.instance).into())
    }
}

fn active_vms(genome: &PlacementGenome, n_vms: usize) -> Vec<usize> {
    let mut counts = vec![0usize; n_vms];
    for replicas in &genome.placements {
        for &v in replicas {
            counts[v] += 1;
        }
    }
    counts
}

/// The six elementary mutation operators. Each preserves genome invariants
/// and returns the genome unchanged when it cannot apply.
pub fn operator_set(instance: &Arc<CloudInstance>) -> OperatorPool<PlacementGenome> {
    let n_vms = instance.vms.len();

    let add_replica = {
        let inst = instance.clone();
        OperatorHandle::new(
            "AddReplica",
            move |g: &PlacementGenome, rng: &mut dyn RngCore| {
                let mut out = g.clone();
                let c = rng.gen_range(0..out.component_count());
                let candidates: Vec<usize> = (0..inst.vms.len())
                    .filter(|v| !out.placements[c].contains(v))
                    .collect();
                if let Some(&vm) = pick(&candidates, rng) {
                    out.insert_replica(c, vm);
                }
                out
            },
        )
    };

    let remove_replica = OperatorHandle::new(
        "RemoveReplica",
        move |g: &PlacementGenome, rng: &mut dyn RngCore| {
            let mut out = g.clone();
            let candidates: Vec<usize> = (0..out.component_count())
                .filter(|&c| out.placements[c].len() >= 2)
                .collect();
            if let Some(&c) = pick(&candidates, rng) {
                let vm = out.placements[c][rng.gen_range(0..out.placements[c].len())];
                out.remove_replica(c, vm);
            }
            out
        },
    );

    let move_component = {
        let inst = instance.clone();
        OperatorHandle::new(
            "MoveComponent",
            move |g: &PlacementGenome, rng: &mut dyn RngCore| {
                let mut out = g.clone();
                let c = rng.gen_range(0..out.component_count());
                let targets: Vec<usize> = (0..inst.vms.len())
                    .filter(|v| !out.placements[c].contains(v))
                    .collect();
                if let Some(&target) = pick(&targets, rng) {
                    let from = out.placements[c][rng.gen_range(0..out.placements[c].len())];
                    out.remove_replica(c, from);
                    out.insert_replica(c, target);
                }
                out
            },
        )
    };

    let migrate = |name: &'static str, from: Location, to: Location| {
        let inst = instance.clone();
        OperatorHandle::new(name, move |g: &PlacementGenome, rng: &mut dyn RngCore| {
            let mut out = g.clone();
            let candidates: Vec<usize> = (0..out.component_count())
                .filter(|&c| {
                    let replicas = &out.placements[c];
                    replicas.iter().any(|&v| inst.vms[v].location == from)
                        && (0..inst.vms.len())
                            .any(|v| inst.vms[v].location == to && !replicas.contains(&v))
                })
                .collect();
            if let Some(&c) = pick(&candidates, rng) {
                let sources: Vec<usize> = out.placements[c]
                    .iter()
                    .copied()
                    .filter(|&v| inst.vms[v].location == from)
                    .collect();
                let targets: Vec<usize> = (0..inst.vms.len())
                    .filter(|&v| inst.vms[v].location == to && !out.placements[c].contains(&v))
                    .collect();
                let source = sources[rng.gen_range(0..sources.len())];
                let target = targets[rng.gen_range(0..targets.len())];
                out.remove_replica(c, source);
                out.insert_replica(c, target);
            }
            out
        })
    };
    let migrate_to_public = migrate("MigrateToPublic", Location::Private, Location::Public);
    let migrate_to_private = migrate("MigrateToPrivate", Location::Public, Location::Private);

    let consolidate = OperatorHandle::new(
        "ConsolidateVM",
        move |g: &PlacementGenome, rng: &mut dyn RngCore| {
            let mut out = g.clone();
            let counts = active_vms(&out, n_vms);
            let active: Vec<usize> = (0..n_vms).filter(|&v| counts[v] > 0).collect();
            if active.len() <= 1 {
                return out;
            }
            // Vacate the active VM hosting the fewest components (ties to
            // the lowest index), spreading its load over the others.
            let vacated = *active
                .iter()
                .min_by_key(|&&v| (counts[v], v))
                .expect("active set non-empty");
            let others: Vec<usize> = active.into_iter().filter(|&v| v != vacated).collect();
            for c in 0..out.component_count() {
                if out.placements[c].contains(&vacated) {
                    out.remove_replica(c, vacated);
                    if out.placements[c].is_empty() {
                        let target = others[rng.gen_range(0..others.len())];
                        out.insert_replica(c, target);
                    }
                }
            }
            out
        },
    );

    OperatorPool::new(vec![
        add_replica,
        remove_replica,
        move_component,
        migrate_to_public,
        migrate_to_private,
        consolidate,
    ])
}

/// Uniform per-component crossover: each component's entire replica set is
/// exchanged between the children with probability 1/2.
pub fn crossover() -> CrossoverOperator<PlacementGenome> {
    CrossoverOperator::new(
        |a: &PlacementGenome, b: &PlacementGenome, rng: &mut dyn RngCore| {
            assert_eq!(
                a.component_count(),
                b.component_count(),
                "crossover requires genomes from the same instance"
            );
            let mut child_a = a.clone();
            let mut child_b = b.clone();
            for c in 0..a.component_count() {
                if rng.gen_bool(0.5) {
                    std::mem::swap(&mut child_a.placements[c], &mut child_b.placements[c]);
                }
            }
            (child_a, child_b)
        },
    )
}

fn pick<'a, T>(candidates: &'a [T], rng: &mut dyn RngCore) -> Option<&'a T> {
    if candidates.is_empty() {
        None
    } else {
        Some(&candidates[rng.gen_range(0..candidates.len())])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_vm_instance() -> CloudInstance {
        CloudInstance {
            vms: vec![
                VmSpec {
                    id: "vm0".into(),
                    location: Location::Private,
                    base_latency_ms: 5.0,
                },
                VmSpec {
                    id: "vm1".into(),
                    location: Location::Private,
                    base_latency_ms: 10.0,
                },
                VmSpec {
                    id: "vm2".into(),
                    location: Location::Public,
                    base_latency_ms: 2.0,
                },
            ],
            components: vec![
                ComponentSpec { id: "c0".into() },
                ComponentSpec { id: "c1".into() },
            ],
            cost_private: 1.0,
            cost_public: 0.4,
            remote_penalty_ms: 40.0,
        }
    }

    #[test]
    fn cost_sums_active_vm_prices() {
        let inst = three_vm_instance();
        // Components on vm0 and vm2 only: 1.0 + 0.4.
        let genome = PlacementGenome::new(vec![vec![0], vec![2]]);
        assert_eq!(cost(&genome, &inst), 1.4);

        let consolidated = PlacementGenome::new(vec![vec![0], vec![0]]);
        assert_eq!(cost(&consolidated, &inst), 1.0);

        let everywhere = PlacementGenome::new(vec![vec![0, 1, 2], vec![0, 1, 2]]);
        assert_eq!(cost(&everywhere, &inst), 2.4);
    }

    #[test]
    fn latency_takes_the_best_replica_and_averages_components() {
        let inst = three_vm_instance();
        // c0 replicated on vm1 (10) and vm2 (2+40=42): contributes 10.
        // c1 on vm0: contributes 5. Mean = 7.5.
        let genome = PlacementGenome::new(vec![vec![1, 2], vec![0]]);
        assert_eq!(latency(&genome, &inst), 7.5);

        // Two components with effective latencies 10 and 30 average to 20.
        let mut inst2 = three_vm_instance();
        inst2.vms[0].base_latency_ms = 10.0;
        inst2.vms[1].base_latency_ms = 30.0;
        let genome2 = PlacementGenome::new(vec![vec![0], vec![1]]);
        assert_eq!(latency(&genome2, &inst2), 20.0);

        // All single-replica on one public VM: base 5 + penalty 40.
        let mut inst3 = three_vm_instance();
        inst3.vms[2].base_latency_ms = 5.0;
        let genome3 = PlacementGenome::new(vec![vec![2], vec![2]]);
        assert_eq!(latency(&genome3, &inst3), 45.0);
    }

    #[test]
    fn remove_replica_is_a_no_op_on_single_replica_genomes() {
        let inst = Arc::new(three_vm_instance());
        let pool = operator_set(&inst);
        let remove = pool.get(pool.position("RemoveReplica").unwrap());
        let genome = PlacementGenome::new(vec![vec![0], vec![2]]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(remove.apply(&genome, &mut rng), genome);
    }

    #[test]
    fn migrate_to_public_is_a_no_op_without_public_vms() {
        let mut inst = three_vm_instance();
        inst.vms[2].location = Location::Private;
        let inst = Arc::new(inst);
        let pool = operator_set(&inst);
        let migrate = pool.get(pool.position("MigrateToPublic").unwrap());
        let genome = PlacementGenome::new(vec![vec![0], vec![1]]);
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            assert_eq!(migrate.apply(&genome, &mut rng), genome);
        }
    }

    #[test]
    fn add_replica_never_increases_latency() {
        let inst = Arc::new(random_instance(8, 6, 0.5, 3));
        let pool = operator_set(&inst);
        let add = pool.get(pool.position("AddReplica").unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut genome = random_genome(&inst, &mut rng);
        for _ in 0..200 {
            let before = latency(&genome, &inst);
            let after_genome = add.apply(&genome, &mut rng);
            assert!(latency(&after_genome, &inst) <= before + 1e-12);
            genome = after_genome;
        }
    }

    #[test]
    fn add_replica_on_active_vm_keeps_cost() {
        let inst = Arc::new(three_vm_instance());
        let genome = PlacementGenome::new(vec![vec![0], vec![1]]);
        let mut with_extra = genome.clone();
        with_extra.insert_replica(0, 1);
        assert_eq!(cost(&genome, &inst), cost(&with_extra, &inst));
    }

    #[test]
    fn consolidate_reduces_cost_when_it_vacates_a_vm() {
        let inst = Arc::new(random_instance(6, 8, 0.5, 5));
        let pool = operator_set(&inst);
        let consolidate = pool.get(pool.position("ConsolidateVM").unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let genome = random_genome(&inst, &mut rng);
            let before_active = active_vms(&genome, inst.vms.len())
                .iter()
                .filter(|&&c| c > 0)
                .count();
            let after = consolidate.apply(&genome, &mut rng);
            if before_active > 1 {
                assert!(cost(&after, &inst) < cost(&genome, &inst));
            } else {
                assert_eq!(after, genome);
            }
        }
    }

    #[test]
    fn all_operators_preserve_genome_invariants() {
        let inst = Arc::new(random_instance(10, 12, 0.4, 11));
        let pool = operator_set(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut genome = random_genome(&inst, &mut rng);
        for trial in 0..10_000 {
            let op = pool.get(trial % pool.len());
            genome = op.apply(&genome, &mut rng);
            genome
                .validate(&inst)
                .expect("operator broke genome invariants");
        }
    }

    #[test]
    fn objectives_are_pure() {
        let inst = random_instance(7, 9, 0.3, 21);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let genome = random_genome(&inst, &mut rng);
        let c1 = cost(&genome, &inst);
        let l1 = latency(&genome, &inst);
        for _ in 0..10 {
            assert_eq!(cost(&genome, &inst), c1);
            assert_eq!(latency(&genome, &inst), l1);
        }
    }

    #[test]
    fn generated_instances_have_conflicting_objectives() {
        for seed in 0..20 {
            let inst = random_instance(20, 30, 0.5, seed);
            let best_private = (0..inst.vms.len())
                .filter(|&v| inst.vms[v].location == Location::Private)
                .min_by(|&a, &b| {
                    inst.effective_latency(a)
                        .partial_cmp(&inst.effective_latency(b))
                        .unwrap()
                })
                .unwrap();
            let best_public = (0..inst.vms.len())
                .filter(|&v| inst.vms[v].location == Location::Public)
                .min_by(|&a, &b| {
                    inst.effective_latency(a)
                        .partial_cmp(&inst.effective_latency(b))
                        .unwrap()
                })
                .unwrap();
            let n = inst.components.len();
            let all_private = PlacementGenome::new(vec![vec![best_private]; n]);
            let all_public = PlacementGenome::new(vec![vec![best_public]; n]);
            let a: ObjectiveVector = ObjectivePair::of(&all_private, &inst).into();
            let b: ObjectiveVector = ObjectivePair::of(&all_public, &inst).into();
            assert!(
                !a.dominates(&b) && !b.dominates(&a),
                "objectives do not conflict"
            );
        }
    }

    #[test]
    fn crossover_of_identical_parents_returns_them() {
        let inst = random_instance(5, 6, 0.4, 31);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let genome = random_genome(&inst, &mut rng);
        let (c1, c2) = crossover().apply(&genome, &genome, &mut rng);
        assert_eq!(c1, genome);
        assert_eq!(c2, genome);
    }

    #[test]
    fn crossover_is_deterministic_given_the_seed() {
        let inst = random_instance(5, 6, 0.4, 31);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_genome(&inst, &mut rng);
        let b = random_genome(&inst, &mut rng);
        let run = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            crossover().apply(&a, &b, &mut rng)
        };
        assert_eq!(run(77), run(77));
    }

    #[test]
    fn crossover_children_swap_whole_replica_sets() {
        let inst = random_instance(6, 10, 0.5, 41);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_genome(&inst, &mut rng);
        let b = random_genome(&inst, &mut rng);
        let (c1, c2) = crossover().apply(&a, &b, &mut rng);
        for c in 0..a.component_count() {
            let straight = c1.replicas(c) == a.replicas(c) && c2.replicas(c) == b.replicas(c);
            let swapped = c1.replicas(c) == b.replicas(c) && c2.replicas(c) == a.replicas(c);
            assert!(straight || swapped);
        }
    }

    #[test]
    fn generated_instances_are_deterministic() {
        let a = random_instance(100, 50, 0.5, 7);
        let b = random_instance(100, 50, 0.5, 7);
        assert_eq!(a.to_json_string().unwrap(), b.to_json_string().unwrap());
        assert_eq!(
            a.vms
                .iter()
                .filter(|v| v.location == Location::Public)
                .count(),
            50
        );
    }

    #[test]
    fn zero_public_fraction_generates_only_private_vms() {
        let inst = random_instance(10, 5, 0.0, 8);
        assert!(inst.vms.iter().all(|v| v.location == Location::Private));
    }

    #[test]
    fn single_vm_instance_forces_the_only_feasible_genome() {
        let inst = random_instance(1, 3, 0.0, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let genome = random_genome(&inst, &mut rng);
        assert!(genome.placements.iter().all(|r| r.as_slice() == [0]));
        assert_eq!(cost(&genome, &inst), 1.0);
    }

    #[test]
    fn random_genomes_place_every_component_once() {
        let inst = random_instance(12, 40, 0.5, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let genome = random_genome(&inst, &mut rng);
        assert!(genome.placements.iter().all(|r| r.len() == 1));
        genome.validate(&inst).unwrap();
        let mut rng2 = ChaCha8Rng::seed_from_u64(6);
        assert_eq!(genome, random_genome(&inst, &mut rng2));
    }

    #[test]
    fn instance_json_round_trips_bit_exact() {
        let text = r#"{"vms":[{"id":"vm0","location":"private","base_latency_ms":5.0},{"id":"vm1","location":"public","base_latency_ms":2.5}],"components":[{"id":"c0"},{"id":"c1"}],"cost_private":1.0,"cost_public":0.4,"remote_penalty_ms":40.0}"#;
        let inst = CloudInstance::from_json_str(text).unwrap();
        assert_eq!(inst.to_json_string().unwrap(), text);

        let generated = random_instance(9, 4, 0.3, 15);
        let serialized = generated.to_json_string().unwrap();
        let reparsed = CloudInstance::from_json_str(&serialized).unwrap();
        assert_eq!(reparsed.to_json_string().unwrap(), serialized);
    }

    #[test]
    fn genome_json_round_trips_bit_exact() {
        let inst = three_vm_instance();
        let text = r#"{"placements":{"c0":["vm0","vm2"],"c1":["vm1"]}}"#;
        let genome = PlacementGenome::from_json_str(text, &inst).unwrap();
        assert_eq!(genome.to_json_string(&inst).unwrap(), text);
        assert_eq!(genome.replicas(0), [0, 2]);
        assert_eq!(genome.replicas(1), [1]);
    }

    #[test]
    fn genome_json_rejects_bad_placements() {
        let inst = three_vm_instance();
        let missing = r#"{"placements":{"c0":["vm0"]}}"#;
        assert!(PlacementGenome::from_json_str(missing, &inst).is_err());
        let unknown_vm = r#"{"placements":{"c0":["vm9"],"c1":["vm0"]}}"#;
        assert!(PlacementGenome::from_json_str(unknown_vm, &inst).is_err());
        let unknown_component = r#"{"placements":{"c0":["vm0"],"c1":["vm1"],"cX":["vm0"]}}"#;
        assert!(PlacementGenome::from_json_str(unknown_component, &inst).is_err());
        let empty = r#"{"placements":{"c0":[],"c1":["vm0"]}}"#;
        assert!(PlacementGenome::from_json_str(empty, &inst).is_err());
    }

    #[test]
    fn instance_validation_rejects_bad_data() {
        let mut inst = three_vm_instance();
        inst.cost_private = -1.0;
        assert!(inst.validate().is_err());

        let mut inst = three_vm_instance();
        inst.vms.clear();
        assert!(inst.validate().is_err());

        let mut inst = three_vm_instance();
        inst.vms[1].id = "vm0".into();
        assert!(inst.validate().is_err());
    }

    #[test]
    fn objective_bounds_enclose_every_random_genome() {
        let inst = random_instance(15, 25, 0.5, 18);
        let [cost_bounds, latency_bounds] = inst.objective_bounds();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let pool = operator_set(&Arc::new(inst.clone()));
        let mut genome = random_genome(&inst, &mut rng);
        for trial in 0..2000 {
            let c = cost(&genome, &inst);
            let l = latency(&genome, &inst);
            assert!(c >= cost_bounds.0 - 1e-12 && c <= cost_bounds.1 + 1e-12);
            assert!(l >= latency_bounds.0 - 1e-12 && l <= latency_bounds.1 + 1e-12);
            genome = pool.get(trial % pool.len()).apply(&genome, &mut rng);
        }
    }
}
