/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Neighbours as `"word<TAB>score"` lines.
     */
    neighbours(word: string, k: number, weighted: boolean): string[];
    constructor(text: string, m: number, left: number, right: number);
    /**
     * `[raw γ, PPMI Pearson]`.
     */
    similarity(a: string, b: string): Float64Array;
    summary(): string;
    /**
     * Text of a small seeded synthetic corpus with topic structure.
     */
    static synthetic_text(seed: bigint): string;
    vector(word: string, weighted: boolean): Float64Array;
    vocabulary(): string[];
}

/**
 * Tokens of `text` as `"token<TAB>hash<TAB>bucket"` lines.
 */
export function hash_buckets(text: string, m: number): string[];

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_neighbours: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly demo_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly demo_similarity: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly demo_summary: (a: number) => [number, number];
    readonly demo_synthetic_text: (a: bigint) => [number, number];
    readonly demo_vector: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly demo_vocabulary: (a: number) => [number, number];
    readonly hash_buckets: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
