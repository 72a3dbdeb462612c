use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use dqjulia::{export_mesh, render, voxelize, write_ppm};

use crate::config::{Mode, RunConfig};
use crate::sweep::{sweep_file_name, SweepRng};

pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    match cfg.mode {
        Mode::Render => run_render(cfg).map(|p| vec![p]),
        Mode::Voxel => run_voxel(cfg).map(|p| vec![p]),
        Mode::Sweep => run_sweep(cfg),
    }
}

/// Renders the configured scene to a PPM at `cfg.output`.
pub fn run_render(cfg: &RunConfig) -> Result<PathBuf> {
    let image = render(
        &cfg.scene(),
        &cfg.camera,
        &cfg.march,
        &cfg.shading(),
        cfg.workers,
    );
    write_ppm(&image, &cfg.output).context("writing image")?;
    Ok(cfg.output.clone())
}

/// Voxelizes the configured scene and writes the cube mesh to `cfg.output`.
pub fn run_voxel(cfg: &RunConfig) -> Result<PathBuf> {
    let grid = voxelize(&cfg.scene(), &cfg.voxel, cfg.workers);
    fs::write(&cfg.output, export_mesh(&grid))
        .with_context(|| format!("writing mesh {}", cfg.output.display()))?;
    Ok(cfg.output.clone())
}

/// Renders `cfg.count` random constants into the directory `cfg.output`.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&cfg.output)
        .with_context(|| format!("creating sweep directory {}", cfg.output.display()))?;
    let mut rng = SweepRng::new(cfg.seed);
    let (march, shading) = (cfg.march, cfg.shading());
    let mut written = Vec::with_capacity(cfg.count);
    for index in 0..cfg.count {
        let mut scene = cfg.scene();
        scene.c = rng.next_constant();
        let path = cfg.output.join(sweep_file_name(index, &scene.c));
        let image = render(&scene, &cfg.camera, &march, &shading, cfg.workers);
        write_ppm(&image, &path).context("writing sweep image")?;
        written.push(path);
    }
    Ok(written)
}
