/* tslint:disable */
/* eslint-disable */

export class Reconstruction {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly estimatedLoss: number;
    readonly pixels: Uint8Array;
}

export function corrupt(pixels: Uint8Array, delta: number, seed: number): Uint8Array;

export function denoiseDude(noisy: Uint8Array, delta: number, k: number): Reconstruction;

export function denoiseNeural(noisy: Uint8Array, delta: number, k: number, epochs: number, seed: number): Reconstruction;

export function dudeCurve(noisy: Uint8Array, delta: number, kmax: number): Float64Array;

export function errorRate(a: Uint8Array, b: Uint8Array): number;

export function lossTables(delta: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_reconstruction_free: (a: number, b: number) => void;
    readonly corrupt: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly denoiseDude: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly denoiseNeural: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly dudeCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly errorRate: (a: number, b: number, c: number, d: number) => number;
    readonly lossTables: (a: number) => [number, number, number, number];
    readonly reconstruction_estimatedLoss: (a: number) => number;
    readonly reconstruction_pixels: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
