/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_reconstruction_free: (a: number, b: number) => void;
export const corrupt: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const denoiseDude: (a: number, b: number, c: number, d: number) => [number, number, number];
export const denoiseNeural: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const dudeCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const errorRate: (a: number, b: number, c: number, d: number) => number;
export const lossTables: (a: number) => [number, number, number, number];
export const reconstruction_estimatedLoss: (a: number) => number;
export const reconstruction_pixels: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
