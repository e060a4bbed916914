//! Grid scans split into contiguous index ranges, one per worker. Every cell
//! is written to its own slot, so the assembled grid does not depend on the
//! worker count or on scheduling.

use std::thread;

use anyon_thermo::transitions::{Cell, GridRequest, GridScan};
use anyon_thermo::Result;

pub fn parallel_scan(request: GridRequest, jobs: usize) -> Result<GridScan> {
    let len = request.len();
    let jobs = jobs.clamp(1, len.max(1));
    let chunk = len.div_ceil(jobs);
    let mut slots: Vec<Option<Result<Cell>>> = vec![None; len];
    thread::scope(|s| {
        for (k, part) in slots.chunks_mut(chunk).enumerate() {
            let request = &request;
            s.spawn(move || {
                let offset = k * chunk;
                for (i, slot) in part.iter_mut().enumerate() {
                    *slot = Some(request.cell(offset + i));
                }
            });
        }
    });
    // the lowest failing index wins, independent of which worker saw it first
    let cells = slots
        .into_iter()
        .map(|c| c.expect("every slot is filled by its worker"))
        .collect::<Result<Vec<_>>>()?;
    GridScan::from_cells(request, cells)
}
