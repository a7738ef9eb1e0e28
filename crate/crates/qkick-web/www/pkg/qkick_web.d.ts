/* tslint:disable */
/* eslint-disable */

/**
 * Classification record and spectrum of a zoo channel, e.g. `E_square(p=0.3)`.
 */
export function classifyChannel(spec: string): string;

/**
 * System purity when the channel kicks the bath of a random two-qubit-system
 * Hamiltonian.
 */
export function ddCurve(spec: string, seed: bigint, n_max: bigint, t: number): string;

/**
 * Distance of the kicked evolution from the bare kicks for a random Hamiltonian.
 */
export function zenoCurve(spec: string, seed: bigint, n_max: bigint, t: number): string;

export function zooNames(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly classifyChannel: (a: number, b: number) => [number, number, number, number];
    readonly ddCurve: (a: number, b: number, c: bigint, d: bigint, e: number) => [number, number, number, number];
    readonly zenoCurve: (a: number, b: number, c: bigint, d: bigint, e: number) => [number, number, number, number];
    readonly zooNames: () => [number, number];
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
