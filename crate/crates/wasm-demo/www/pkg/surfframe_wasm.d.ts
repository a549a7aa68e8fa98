/* tslint:disable */
/* eslint-disable */

/**
 * Fixed dimensions per degree, and one fixed basis function of degree `l`
 * sampled on a longitude-latitude grid.
 */
export function eigenbasis_map(group: string, l_max: number, l: number, index: number, width: number, height: number): string;

/**
 * Frame spectrum for the triangle (`shape = "triangle"`) or the square.
 */
export function frame_spectrum(shape: string, n: number, delta: number, window: number, seed: bigint): string;

/**
 * Exact sphere transform and its leading asymptotic term along a ray,
 * sampled on `[from, to]`.
 */
export function herz_profile(dimension: number, from: number, to: number, samples: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly eigenbasis_map: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly frame_spectrum: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number, number];
    readonly herz_profile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
