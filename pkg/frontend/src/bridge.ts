/**
 * Bridge between framework tensors and the sczip command-line tool.
 *
 * Numeric behavior (quantization, entropy coding, container layout) is owned
 * entirely by the CLI; this module only moves RTF and .scz files around.
 */

import { spawnSync } from 'node:child_process';
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { decodeRtf, encodeRtf, type RtfTensor } from './rtf.js';

/** Anything we can interpret as a dense float32 tensor. */
export interface TensorLike {
  dims: number[];
  data: Float32Array | number[];
}

export interface ExportManifest {
  modelName: string;
  splitLayerLabel: string;
  dims: number[];
  dtype: 'float32';
  rtfPath: string;
  qBits: number | null;
}

export interface RoundtripResult {
  tensor: RtfTensor;
  containerBytes: number;
  maxAbsError: number;
}

export class CliUnavailableError extends Error {}

function asFloat32(t: TensorLike): Float32Array {
  if (t.data instanceof Float32Array) return t.data;
  if (Array.isArray(t.data)) return Float32Array.from(t.data);
  throw new TypeError('tensor data must be a Float32Array or number array');
}

/** Write a dense activation tensor to an RTF file and describe it. */
export function exportActivation(
  tensor: TensorLike,
  path: string,
  meta: { modelName?: string; splitLayerLabel?: string; qBits?: number } = {},
): ExportManifest {
  const data = asFloat32(tensor);
  writeFileSync(path, encodeRtf({ dims: tensor.dims, data }));
  return {
    modelName: meta.modelName ?? 'unknown',
    splitLayerLabel: meta.splitLayerLabel ?? 'unknown',
    dims: [...tensor.dims],
    dtype: 'float32',
    rtfPath: path,
    qBits: meta.qBits ?? null,
  };
}

/** Read an RTF file back into a tensor. */
export function importActivation(path: string): RtfTensor {
  return decodeRtf(readFileSync(path));
}

function runCli(args: string[], cli: string): void {
  const proc = spawnSync(cli, args, { encoding: 'utf8' });
  if (proc.error && (proc.error as NodeJS.ErrnoException).code === 'ENOENT') {
    throw new CliUnavailableError(`'${cli}' not found on PATH`);
  }
  if (proc.status !== 0) {
    throw new Error(
      `'${cli} ${args.join(' ')}' exited ${proc.status}: ${proc.stderr}`,
    );
  }
}

/**
 * Export, compress at the given bit width, decompress, and re-import.
 * Returns the reconstructed tensor together with the compressed size and
 * the worst-case reconstruction error.
 */
export function roundtrip(
  tensor: TensorLike,
  qBits: number,
  options: { cli?: string } = {},
): RoundtripResult {
  const cli = options.cli ?? 'sczip';
  const dir = mkdtempSync(join(tmpdir(), 'sczip-bridge-'));
  try {
    const rtfIn = join(dir, 'in.rtf');
    const scz = join(dir, 'out.scz');
    const rtfOut = join(dir, 'out.rtf');
    exportActivation(tensor, rtfIn, { qBits });
    runCli(['compress', rtfIn, '--q', String(qBits), '-o', scz], cli);
    runCli(['decompress', scz, '-o', rtfOut], cli);
    const out = importActivation(rtfOut);
    const original = asFloat32(tensor);
    let maxAbsError = 0;
    for (let i = 0; i < original.length; i++) {
      const e = Math.abs(out.data[i] - original[i]);
      if (e > maxAbsError) maxAbsError = e;
    }
    const containerBytes = readFileSync(scz).length;
    return { tensor: out, containerBytes, maxAbsError };
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}
