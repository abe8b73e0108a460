/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    channelCenters(): Float64Array;
    channelFactors(): Uint32Array;
    diagonalRow(): Float64Array;
    frameSweep(scales: Float64Array): Float64Array;
    isTight(): boolean;
    constructor(family: string, c: number, d: number, l: number, window: string, stretch: number, len: number, fs: number);
    pictureGray(): Uint8Array;
    pictureHeight(): number;
    pictureWidth(): number;
    renderChirp(f0: number, f1: number, width: number): number;
    responseRows(): Float64Array;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_channelCenters: (a: number) => [number, number];
    readonly demo_channelFactors: (a: number) => [number, number];
    readonly demo_diagonalRow: (a: number) => [number, number];
    readonly demo_frameSweep: (a: number, b: number, c: number) => [number, number, number, number];
    readonly demo_isTight: (a: number) => number;
    readonly demo_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number];
    readonly demo_pictureGray: (a: number) => [number, number];
    readonly demo_pictureHeight: (a: number) => number;
    readonly demo_pictureWidth: (a: number) => number;
    readonly demo_renderChirp: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly demo_responseRows: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
