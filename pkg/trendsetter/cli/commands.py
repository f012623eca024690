import json
import logging
from argparse import Namespace
from pathlib import Path
from typing import Dict, Optional

from trendsetter.analysis import (
    aggregate_ranking, correlate_metadata, export_graph, influence_dynamics, rank_entities, read_groups,
    read_metadata, read_ranking, write_dynamics, write_ranking,
)
from trendsetter.config import service_config
from trendsetter.config.pipeline import PipelineConfig, read_document
from trendsetter.decorators import argument, subcommand
from trendsetter.exceptions import TrendsetterUserError
from trendsetter.forecast import (
    read_forecasts, score_forecasts, standard_models, write_forecasts, write_report,
)
from trendsetter.forecast.evaluate import run_models
from trendsetter.influence import build_global_tensor, build_influence_tensor, load_tensor, save_tensor
from trendsetter.ingest import (
    apply_split, build_trajectories, deseasonalize_set, read_events, read_trajectories, read_unit_table,
    write_events, write_trajectories,
)
from trendsetter.ingest.io import MANIFEST_JSON, TRAJECTORY_CSV
from trendsetter.styles import fit_styles, load_style_model, save_style_model
from trendsetter.synth import SynthConfig, generate, ground_truth

from .models import CommandResult

_log = logging.getLogger(__name__)


def resolve(path: Optional[Path]) -> Optional[Path]:
    return None if path is None else service_config.resolve(path)


def _trajectory_outputs(directory: Path):
    return [directory / TRAJECTORY_CSV, directory / MANIFEST_JSON]


def _read_events(path: Path, config: PipelineConfig):
    return read_events(path, config.ingest.epoch, config.ingest.timezone)


@subcommand('ingest', help='Validate events and write them as bucketed CSV')
@argument('--events', type=Path, required=True, help='JSON-lines or CSV event file')
@argument('--output', type=Path, required=True, help='Output CSV (unit,t,a0,...)')
def ingest(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    events_path, output = resolve(args.events), resolve(args.output)
    events = _read_events(events_path, config)
    output.parent.mkdir(parents=True, exist_ok=True)
    write_events(events, output)
    return CommandResult(inputs={'events': events_path}, outputs=[output])


@subcommand('styles', help='Discover styles from event attribute vectors')
@argument('--events', type=Path, required=True)
@argument('--output', type=Path, required=True, help='Style model JSON')
@argument('--kind', choices=['gmm', 'nmf'], dest='styles.kind')
@argument('--k', type=int, dest='styles.k', help='Number of styles')
def styles(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    events_path, output = resolve(args.events), resolve(args.output)
    events = _read_events(events_path, config)
    model = fit_styles(events.attrs, config.styles)
    output.parent.mkdir(parents=True, exist_ok=True)
    save_style_model(model, output)
    return CommandResult(inputs={'events': events_path}, outputs=[output])


@subcommand('trajectories', help='Build style popularity trajectories per unit')
@argument('--events', type=Path, required=True)
@argument('--style-model', type=Path, required=True)
@argument('--units', type=Path, help='CSV with a "unit" column; defaults to the units in the events')
@argument('--output', type=Path, required=True, help='Output directory')
@argument('--no-split', action='store_true', help='Leave the trajectories without train/validation/test boundaries')
def trajectories(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    events_path, model_path, output = resolve(args.events), resolve(args.style_model), resolve(args.output)
    inputs = {'events': events_path, 'style_model': model_path}
    units = None
    if args.units:
        inputs['units'] = resolve(args.units)
        units = read_unit_table(inputs['units'])
    ts = build_trajectories(_read_events(events_path, config), load_style_model(model_path), units=units,
                            resolution=config.ingest.resolution)
    if not args.no_split:
        ts = apply_split(ts, config.ingest.validation_weeks, config.ingest.test_weeks, config.influence.max_lag)
    write_trajectories(ts, output)
    return CommandResult(inputs=inputs, outputs=_trajectory_outputs(output), manifest_dir=output)


@subcommand('deseasonalize', help='Subtract the value one season earlier from every trajectory')
@argument('--trajectories', type=Path, required=True)
@argument('--output', type=Path, required=True, help='Output directory')
@argument('--period', type=int, dest='ingest.season')
def deseasonalize(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    source, output = resolve(args.trajectories), resolve(args.output)
    write_trajectories(deseasonalize_set(read_trajectories(source), config.ingest.season), output)
    return CommandResult(inputs={'trajectories': source}, outputs=_trajectory_outputs(output), manifest_dir=output)


@subcommand('granger', help='Discover Granger influence between units, styles or on the global trend')
@argument('--trajectories', type=Path, required=True)
@argument('--axis', choices=['unit', 'style', 'global'], default='unit')
@argument('--output', type=Path, required=True, help='Influence tensor JSON')
@argument('--alpha', type=float, dest='influence.alpha')
@argument('--correction', choices=['none', 'lags', 'tensor'], dest='influence.correction')
@argument('--order', type=int, dest='influence.order')
@argument('--max-lag', type=int, dest='influence.max_lag')
def granger(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    source, output = resolve(args.trajectories), resolve(args.output)
    ts = read_trajectories(source)
    if args.axis == 'global':
        tensor = build_global_tensor(ts, config.influence, jobs)
    else:
        tensor = build_influence_tensor(ts, args.axis, config.influence, jobs)
    output.parent.mkdir(parents=True, exist_ok=True)
    save_tensor(tensor, output)
    return CommandResult(inputs={'trajectories': source}, outputs=[output])


def _tensors(args: Namespace) -> Dict[str, Path]:
    paths = {}
    if args.unit_tensor:
        paths['unit_tensor'] = resolve(args.unit_tensor)
    if args.style_tensor:
        paths['style_tensor'] = resolve(args.style_tensor)
    return paths


def _models(args: Namespace, config: PipelineConfig, jobs: int, paths: Dict[str, Path]):
    unit = load_tensor(paths['unit_tensor']) if 'unit_tensor' in paths else None
    style = load_tensor(paths['style_tensor']) if 'style_tensor' in paths else None
    return standard_models(config.forecast, unit, style, jobs)


@subcommand('forecast', help='Forecast the test region with baselines and learned models')
@argument('--trajectories', type=Path, required=True)
@argument('--unit-tensor', type=Path)
@argument('--style-tensor', type=Path)
@argument('--models', nargs='+', dest='forecast.models', help='Model names; defaults to every model')
@argument('--horizon', type=int, dest='forecast.horizon')
@argument('--output', type=Path, required=True, help='Forecast CSV (model,style,unit,step,value)')
def forecast(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    source, output = resolve(args.trajectories), resolve(args.output)
    inputs = {'trajectories': source, **_tensors(args)}
    ts = read_trajectories(source)
    forecasts = run_models(_models(args, config, jobs, inputs), ts, config.forecast.horizon)
    output.parent.mkdir(parents=True, exist_ok=True)
    write_forecasts(forecasts, output)
    return CommandResult(inputs=inputs, outputs=[output])


@subcommand('evaluate', help='Score forecasts on the test region (MAE, MAPE)')
@argument('--trajectories', type=Path, required=True)
@argument('--forecasts', type=Path, help='Forecast CSV from the forecast command')
@argument('--unit-tensor', type=Path)
@argument('--style-tensor', type=Path)
@argument('--models', nargs='+', dest='forecast.models')
@argument('--horizon', type=int, dest='forecast.horizon')
@argument('--output', type=Path, required=True, help='Report directory')
def evaluate(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    source, output = resolve(args.trajectories), resolve(args.output)
    inputs = {'trajectories': source, **_tensors(args)}
    ts = read_trajectories(source)
    horizon = config.forecast.horizon
    if args.forecasts:
        inputs['forecasts'] = resolve(args.forecasts)
        forecasts = read_forecasts(inputs['forecasts'])
    else:
        forecasts = run_models(_models(args, config, jobs, inputs), ts, horizon)
    report = score_forecasts(forecasts, ts, horizon)
    write_report(report, output)
    print(report.table())
    return CommandResult(inputs=inputs, outputs=[output / 'report.json', output / 'report.csv'], manifest_dir=output)


@subcommand('rank', help='Rank entities by influence exerted minus influence received')
@argument('--tensor', type=Path, required=True)
@argument('--weight', choices=['lag', 'delta_mse'], dest='influence.weight')
@argument('--groups', type=Path, help='CSV id,group to aggregate the ranking by')
@argument('--output', type=Path, required=True, help='Ranking CSV (id,exerted,received,net)')
def rank(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    tensor_path, output = resolve(args.tensor), resolve(args.output)
    inputs = {'tensor': tensor_path}
    ranking = rank_entities(load_tensor(tensor_path), config.influence.weight)
    if args.groups:
        inputs['groups'] = resolve(args.groups)
        ranking = aggregate_ranking(ranking, read_groups(inputs['groups']))
    output.parent.mkdir(parents=True, exist_ok=True)
    write_ranking(ranking, output)
    print(ranking.table())
    return CommandResult(inputs=inputs, outputs=[output])


@subcommand('dynamics', help='Exerted influence over sliding windows')
@argument('--trajectories', type=Path, required=True)
@argument('--axis', choices=['unit', 'style'], default='unit')
@argument('--window', type=int, dest='analysis.window')
@argument('--stride', type=int, dest='analysis.stride')
@argument('--output', type=Path, required=True, help='Dynamics CSV (window_start,id,score)')
def dynamics(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    source, output = resolve(args.trajectories), resolve(args.output)
    result = influence_dynamics(read_trajectories(source), config.analysis.window, config.analysis.stride,
                                args.axis, config.influence, jobs)
    output.parent.mkdir(parents=True, exist_ok=True)
    write_dynamics(result, output)
    return CommandResult(inputs={'trajectories': source}, outputs=[output])


@subcommand('correlate', help='Correlate an influence ranking with external metadata')
@argument('--ranking', type=Path, required=True)
@argument('--metadata', type=Path, required=True, help='CSV id,value')
@argument('--mode', choices=['world_rank', 'direction'], default='world_rank')
@argument('--tensor', type=Path, help='Influence tensor; required for the direction mode')
@argument('--score', choices=['exerted', 'received', 'net'], dest='analysis.score')
@argument('--output', type=Path, required=True, help='Result JSON')
def correlate(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    ranking_path, metadata_path, output = resolve(args.ranking), resolve(args.metadata), resolve(args.output)
    inputs = {'ranking': ranking_path, 'metadata': metadata_path}
    tensor = None
    if args.tensor:
        inputs['tensor'] = resolve(args.tensor)
        tensor = load_tensor(inputs['tensor'])
    elif args.mode == 'direction':
        raise TrendsetterUserError('The direction mode needs --tensor.')
    value = correlate_metadata(read_ranking(ranking_path), read_metadata(metadata_path), args.mode, tensor,
                               config.analysis.score, config.influence.weight)
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(json.dumps({'mode': args.mode, 'score': config.analysis.score, 'value': value}, indent=1)
                      + '\n')
    print(f'{args.mode} correlation ({config.analysis.score}): {value:.4f}')
    return CommandResult(inputs=inputs, outputs=[output])


@subcommand('synth', help='Generate synthetic trajectories with planted influence')
@argument('--synth-config', type=Path, help='YAML or JSON generator settings')
@argument('--output', type=Path, required=True, help='Output directory')
def synth(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    output = resolve(args.output)
    inputs = {}
    document = {}
    if args.synth_config:
        inputs['synth_config'] = resolve(args.synth_config)
        document = read_document(inputs['synth_config'])
    if args.seed is not None:
        document['seed'] = args.seed
    synth_config = SynthConfig.parse_obj(document)
    ts, truth = generate(synth_config)
    write_trajectories(ts, output)
    outputs = _trajectory_outputs(output) + [output / 'truth.json']
    save_tensor(truth, output / 'truth.json')
    other = 'style' if synth_config.axis == 'unit' else 'unit'
    if synth_config.edges_on(other):
        outputs.append(output / f'truth_{other}.json')
        save_tensor(ground_truth(synth_config, other), outputs[-1])
    return CommandResult(inputs=inputs, outputs=outputs, manifest_dir=output)


@subcommand('export-graph', help='Write an influence tensor as a DOT graph')
@argument('--tensor', type=Path, required=True)
@argument('--threshold', choices=['above_mean', 'raw'], dest='analysis.threshold')
@argument('--weight', choices=['lag', 'delta_mse'], dest='influence.weight')
@argument('--output', type=Path, required=True, help='DOT file')
def export_graph_command(args: Namespace, config: PipelineConfig, jobs: int) -> CommandResult:
    tensor_path, output = resolve(args.tensor), resolve(args.output)
    text = export_graph(load_tensor(tensor_path), config.analysis.threshold, config.influence.weight)
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text)
    return CommandResult(inputs={'tensor': tensor_path}, outputs=[output])
