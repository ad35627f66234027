// unigen-support v1.0.0 — do not edit
using UnityEditor;
using UnityEditor.Compilation;
using UnityEngine;

namespace UniGenSupport
{
    /// <summary>
    /// Echoes compiler diagnostics into the editor log in their canonical
    /// "path(line,col): severity CODE: message" form, so batch-mode log
    /// files can be fed back to the debugging stage verbatim.
    /// </summary>
    [InitializeOnLoad]
    public static class CompileLogCapture
    {
        static CompileLogCapture()
        {
            CompilationPipeline.assemblyCompilationFinished += OnAssemblyCompiled;
        }

        private static void OnAssemblyCompiled(string assemblyPath, CompilerMessage[] messages)
        {
            foreach (CompilerMessage message in messages)
            {
                if (message.type == CompilerMessageType.Error
                    || message.type == CompilerMessageType.Warning)
                {
                    Debug.Log(message.message);
                }
            }
        }
    }
}
