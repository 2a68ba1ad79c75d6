//! In-memory generation jobs, one worker thread each.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use gplan_core::enumerate::{enumerate_floorplans, EnumError, EnumOptions, StopReason};
use gplan_core::floorplan::Floorplan;
use gplan_core::formats::{with_room_ids, GraphDocument};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobStatus {
    Running,
    Done,
    Cancelled,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobKind {
    Generate,
}

#[derive(Debug)]
pub struct JobState {
    pub status: JobStatus,
    pub layouts: Vec<Floorplan>,
    pub stop: Option<StopReason>,
    pub ofp: bool,
    pub error: Option<String>,
}

pub struct Job {
    pub kind: JobKind,
    pub state: Mutex<JobState>,
    cancel: AtomicBool,
    last_used: Mutex<Instant>,
}

impl Job {
    pub fn touch(&self) {
        *self.last_used.lock().unwrap() = Instant::now();
    }

    /// Asks the worker to stop; returns false if the job had already ended.
    pub fn cancel(&self) -> bool {
        self.cancel.store(true, Ordering::SeqCst);
        let mut s = self.state.lock().unwrap();
        if s.status == JobStatus::Running {
            s.status = JobStatus::Cancelled;
            true
        } else {
            false
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub job_cap: usize,
    pub layout_cap: usize,
    pub deadline: Duration,
}

#[derive(Debug, PartialEq, Eq)]
pub enum SubmitError {
    Enumerate(EnumError),
    Full,
}

pub struct Registry {
    limits: Limits,
    next: AtomicU64,
    jobs: Mutex<HashMap<String, Arc<Job>>>,
}

impl Registry {
    pub fn new(limits: Limits) -> Registry {
        Registry {
            limits,
            next: AtomicU64::new(1),
            jobs: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(&self, id: &str) -> Option<Arc<Job>> {
        let job = self.jobs.lock().unwrap().get(id).cloned()?;
        job.touch();
        Some(job)
    }

    /// Validates the graph, registers a job and starts its worker.
    pub fn submit(
        &self,
        doc: GraphDocument,
        limit: Option<usize>,
        allow_ofp: bool,
    ) -> Result<String, SubmitError> {
        let graph = doc.to_graph().expect("documents are checked on parse");
        let cap = self.limits.layout_cap;
        let opts = EnumOptions {
            limit: Some(limit.map_or(cap, |l| l.min(cap))),
            allow_ofp,
            deadline: Some(Instant::now() + self.limits.deadline),
        };
        let mut stream = enumerate_floorplans(&graph, opts).map_err(SubmitError::Enumerate)?;

        let job = Arc::new(Job {
            kind: JobKind::Generate,
            state: Mutex::new(JobState {
                status: JobStatus::Running,
                layouts: Vec::new(),
                stop: None,
                ofp: stream.is_ofp(),
                error: None,
            }),
            cancel: AtomicBool::new(false),
            last_used: Mutex::new(Instant::now()),
        });
        let id = {
            let mut jobs = self.jobs.lock().unwrap();
            if jobs.len() >= self.limits.job_cap && !evict_one(&mut jobs) {
                return Err(SubmitError::Full);
            }
            let id = format!("j{:x}", self.next.fetch_add(1, Ordering::SeqCst));
            jobs.insert(id.clone(), job.clone());
            id
        };

        std::thread::spawn(move || {
            let run = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
                for f in stream.by_ref() {
                    if job.cancel.load(Ordering::SeqCst) {
                        return;
                    }
                    let f = with_room_ids(f, &doc);
                    job.state.lock().unwrap().layouts.push(f);
                }
                let mut s = job.state.lock().unwrap();
                if s.status == JobStatus::Running {
                    s.status = JobStatus::Done;
                    s.stop = stream.stop_reason();
                }
            }));
            if run.is_err() {
                let mut s = job.state.lock().unwrap();
                s.status = JobStatus::Failed;
                s.error = Some("enumeration worker panicked".into());
            }
        });
        log::info!("job {id} started");
        Ok(id)
    }
}

/// Drops the least recently used job that is no longer running.
fn evict_one(jobs: &mut HashMap<String, Arc<Job>>) -> bool {
    let victim = jobs
        .iter()
        .filter(|(_, j)| j.state.lock().unwrap().status != JobStatus::Running)
        .min_by_key(|(_, j)| *j.last_used.lock().unwrap())
        .map(|(id, _)| id.clone());
    match victim {
        Some(id) => {
            log::info!("evicting job {id}");
            jobs.remove(&id);
            true
        }
        None => false,
    }
}
