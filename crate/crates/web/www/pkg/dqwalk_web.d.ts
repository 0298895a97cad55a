/* tslint:disable */
/* eslint-disable */

/**
 * Fourier-space spectrum of `H` for a ring or Moebius ladder with `J = exp`.
 */
export function circulant_spectrum(family: string, n: number, directed: boolean, alpha: number): Float64Array;

/**
 * Hub probability on a star started at the hub: the simulated curve followed
 * by the closed-form curve, `steps` values each.
 */
export function star_hub_curves(n_peripheral: number, directed: boolean, alpha: number, t_end: number, steps: number): Float64Array;

/**
 * Grey levels of the time-node heatmap, row-major with `steps` rows of `N`
 * pixels. Time runs down, node index across.
 */
export function walk_heatmap(family: string, n: number, directed: boolean, alpha: number, t_end: number, steps: number, start: number, log_scale: boolean): Uint8Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly circulant_spectrum: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly star_hub_curves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly walk_heatmap: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
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
