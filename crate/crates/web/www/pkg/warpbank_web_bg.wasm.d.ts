/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_channelCenters: (a: number) => [number, number];
export const demo_channelFactors: (a: number) => [number, number];
export const demo_diagonalRow: (a: number) => [number, number];
export const demo_frameSweep: (a: number, b: number, c: number) => [number, number, number, number];
export const demo_isTight: (a: number) => number;
export const demo_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number];
export const demo_pictureGray: (a: number) => [number, number];
export const demo_pictureHeight: (a: number) => number;
export const demo_pictureWidth: (a: number) => number;
export const demo_renderChirp: (a: number, b: number, c: number, d: number) => [number, number, number];
export const demo_responseRows: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
